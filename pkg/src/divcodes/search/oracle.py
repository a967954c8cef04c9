"""Brute-force cross-checks for the searches at small scale.

Everything here avoids the canonical-form machinery: candidate codes come
from plain enumeration and equivalence is decided by graph isomorphism of the
coordinate/codeword incidence graph (networkx VF2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import networkx as nx
import numpy as np
from networkx.algorithms import isomorphism

from ..codes import Code
from ..errors import BudgetExceeded
from ..gf2 import BitMatrix
from .spec import Mode, SearchResult, SearchSpec


def incidence_graph(c: Code) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from((("c", j) for j in range(c.n)), kind=0)
    for i, w in enumerate(c.codewords()):
        if not w:
            continue
        g.add_node(("w", i), kind=1)
        for j in range(c.n):
            if (w >> j) & 1:
                g.add_edge(("w", i), ("c", j))
    return g


def _invariant(c: Code) -> tuple:
    from collections import Counter

    return (c.n, c.k, c.weight_enumerator.coeffs, tuple(sorted(Counter(c.column_vectors).values())))


def equivalent_vf2(a: Code, b: Code) -> bool:
    if _invariant(a) != _invariant(b):
        return False
    nm = isomorphism.categorical_node_match("kind", None)
    return nx.is_isomorphic(incidence_graph(a), incidence_graph(b), node_match=nm)


class ClassStore:
    """Representatives of equivalence classes, bucketed by cheap invariants."""

    def __init__(self):
        self.buckets: dict[tuple, list[Code]] = {}

    def find(self, c: Code) -> Code | None:
        for r in self.buckets.get(_invariant(c), ()):
            if equivalent_vf2(r, c):
                return r
        return None

    def add(self, c: Code) -> bool:
        if self.find(c) is not None:
            return False
        self.buckets.setdefault(_invariant(c), []).append(c)
        return True

    def __iter__(self):
        for b in self.buckets.values():
            yield from b

    def __len__(self) -> int:
        return sum(len(b) for b in self.buckets.values())


def _parity(k: int) -> np.ndarray:
    pts = np.arange(1 << k)
    return (np.bitwise_count(pts[:, None] & pts[None, :]) & 1).astype(np.int64)


@lru_cache(maxsize=None)
def _multisets(n: int, parts: int) -> np.ndarray:
    """All count vectors of length ``parts`` summing to ``n`` (shared, do not modify)."""
    if parts == 1:
        return np.array([[n]], dtype=np.int64)
    blocks = []
    for first in range(n, -1, -1):
        rest = _multisets(n - first, parts - 1)
        blocks.append(np.hstack([np.full((len(rest), 1), first, np.int64), rest]))
    return np.vstack(blocks)


def code_from_points(counts: np.ndarray, k: int, pts: np.ndarray) -> Code:
    cols = [int(p) for p, m in zip(pts, counts) for _ in range(int(m))]
    rows = tuple(sum(((c >> i) & 1) << j for j, c in enumerate(cols)) for i in range(k))
    return Code(BitMatrix(rows, len(cols)))


def brute_classify(spec: SearchSpec, budget: int) -> ClassStore:
    """Every full-length code meeting the spec, by listing point multisets of GF(2)^k."""
    allowed = spec.allowed()
    lengths = [spec.target_n] if spec.exact_length else range(1, spec.target_n + 1)
    store = ClassStore()
    for n in lengths:
        # 4-divisible codes are self-orthogonal, hence k <= n/2
        kmax = n // 2 if spec.rule.divisor % 4 == 0 else n
        dims = [spec.target_k] if spec.target_k is not None else range(1, kmax + 1)
        for k in dims:
            if k > n:
                continue
            npts = (1 << k) - 1
            if comb(n + npts - 1, n) > budget:
                raise BudgetExceeded(f"{comb(n + npts - 1, n)} point multisets for [{n},{k}]")
            ms = _multisets(n, npts)
            par = _parity(k)[1:, 1:]
            w = ms @ par
            ok = np.isin(w, sorted(allowed)).all(axis=1)
            pts = np.arange(1, 1 << k)
            for row in ms[ok]:
                store.add(code_from_points(row, k, pts))
    return store


def brute_extend(spec: SearchSpec, budget: int) -> ClassStore:
    from .engine import extension_lengths

    seed = spec.seeds[0]
    allowed = spec.allowed()
    n = seed.n
    if (1 << n) * (spec.target_n - n + 1) > budget:
        raise BudgetExceeded(f"2^{n} extension vectors")
    words = seed.codewords()
    store = ClassStore()
    for t in extension_lengths(spec, seed):
        for u in range(1 << n):
            if all(((u ^ c).bit_count() + t) in allowed for c in words):
                rows = seed.gen.rows + (u | (((1 << t) - 1) << n),)
                c = Code(BitMatrix(rows, n + t))
                if c.k == seed.k + 1:
                    store.add(c)
    return store


def brute_lengthen(spec: SearchSpec, budget: int) -> ClassStore:
    allowed = spec.allowed()
    w = spec.residual_weight
    store = ClassStore()
    for seed in spec.seeds:
        k = seed.k
        if not spec.length_ok(seed.n + w):
            continue
        if comb(w + (1 << k) - 1, w) > budget:
            raise BudgetExceeded(f"{comb(w + (1 << k) - 1, w)} point multisets")
        for row in _multisets(w, 1 << k):
            pts = [p for p in range(1 << k) for _ in range(int(row[p]))]
            rows = []
            for i, r in enumerate(seed.gen.rows):
                y = sum(((p >> i) & 1) << j for j, p in enumerate(pts))
                rows.append(r | (y << seed.n))
            rows.append(((1 << w) - 1) << seed.n)
            c = Code(BitMatrix(tuple(rows), seed.n + w))
            if c.k == k + 1 and set(c.nonzero_weights()) <= allowed:
                store.add(c)
    return store


@dataclass
class CompletenessReport:
    agree: bool
    oracle_count: int
    result_count: int
    missing: list[Code] = field(default_factory=list)
    unmatched: list[Code] = field(default_factory=list)
    duplicates: int = 0

    def as_dict(self) -> dict:
        return {
            "agree": self.agree,
            "oracle_count": self.oracle_count,
            "result_count": self.result_count,
            "missing": len(self.missing),
            "unmatched": len(self.unmatched),
            "duplicates": self.duplicates,
        }


def verify_completeness(result: SearchResult, spec: SearchSpec,
                        oracle_budget: int = 2_000_000) -> CompletenessReport:
    if spec.mode is Mode.CLASSIFY:
        store = brute_classify(spec, oracle_budget)
    elif spec.mode is Mode.EXTEND_DIMENSION:
        store = brute_extend(spec, oracle_budget)
    else:
        store = brute_lengthen(spec, oracle_budget)
    hit: set[int] = set()
    unmatched = []
    dup = 0
    for c in result.codes:
        r = store.find(c)
        if r is None:
            unmatched.append(c)
        elif id(r) in hit:
            dup += 1
        else:
            hit.add(id(r))
    missing = [r for r in store if id(r) not in hit]
    agree = not missing and not unmatched and not dup
    return CompletenessReport(agree, len(store), len(result.codes), missing, unmatched, dup)
