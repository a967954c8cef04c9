"""Isomorph-free generation of codes with prescribed weights."""

from .engine import classify, extend_dimension, lengthen_from_residual, run
from .oracle import CompletenessReport, verify_completeness
from .spec import Mode, SearchResult, SearchSpec, SearchStats, WeightRule

__all__ = [
    "classify", "extend_dimension", "lengthen_from_residual", "run",
    "CompletenessReport", "verify_completeness",
    "Mode", "SearchResult", "SearchSpec", "SearchStats", "WeightRule",
]
