"""Divisible binary linear codes: invariants, identities, canonical forms and exhaustive search."""

from .codes import Code, PointMultiset, WeightEnumerator
from .gf2 import BitMatrix

__version__ = "0.1.0"

__all__ = ["BitMatrix", "Code", "PointMultiset", "WeightEnumerator", "__version__"]
