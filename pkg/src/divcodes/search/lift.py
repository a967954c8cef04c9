"""Adding one dimension to a code: all cosets ``u + D`` with admissible weights.

The new code is generated by ``[[G_D, 0], [u, 1^t]]``: every word of the new
coset is ``u + c`` on the old coordinates plus ``t`` ones on appended
coordinates. ``u`` is normalised to vanish on the pivot columns of ``D``, and
non-pivot columns with equal column vectors are interchangeable, so ``u`` is
described by how many columns of each column class it hits.
"""

from __future__ import annotations

from collections.abc import Collection

import numpy as np

from ..canonical import automorphism_generators
from ..codes import Code
from ..gf2 import BitMatrix, bits_to_ints
from . import kernels


def parity_table(k: int) -> np.ndarray:
    return (np.bitwise_count(np.arange(1 << k, dtype=np.uint64)) & 1).astype(np.int64)


def next_allowed(ok: np.ndarray, step: int) -> np.ndarray:
    """``nxt[v]`` = least ``a >= v`` with ``ok[a]`` and ``a = v (mod step)``; ``BIG`` if none.

    The returned table has one extra sentinel slot.
    """
    size = len(ok)
    nxt = np.full(size + step, kernels.BIG, dtype=np.int64)
    for v in range(size - 1, -1, -1):
        nxt[v] = v if ok[v] else nxt[v + step]
    return nxt[: size + 1]


class CosetLifter:
    """Admissible coset representatives of a fixed code ``D``."""

    def __init__(self, d: Code):
        self.d = d
        k, n = d.k, d.n
        self.k, self.n = k, n
        self.piv = list(d.pivots)
        pivset = set(self.piv)
        self.nonpiv = np.array([j for j in range(n) if j not in pivset], dtype=np.int64)
        cols = np.array(d.column_vectors, dtype=np.int64) if n else np.zeros(0, np.int64)
        self.cols = cols
        self.np_cols = cols[self.nonpiv] if len(self.nonpiv) else np.zeros(0, np.int64)
        P = np.zeros((k + 1, 1 << k), dtype=np.int64)
        P[k, :] = np.bincount(self.np_cols, minlength=1 << k)
        for lvl in range(k - 1, -1, -1):
            m = 1 << lvl
            P[lvl, :m] = P[lvl + 1, :m] + P[lvl + 1, m:2 * m]
        self.P = P
        self.par = parity_table(k)
        self.offset = np.bitwise_count(np.arange(1 << k, dtype=np.uint64)).astype(np.int64)
        # column positions of each class, for decoding counts back into vectors
        order = np.argsort(self.np_cols, kind="stable")
        self._sorted_pos = self.nonpiv[order]
        self._class_start = np.searchsorted(self.np_cols[order], np.arange(1 << k))
        self.gen_bits = d.gen.to_array().astype(np.int64) if k else np.zeros((0, n), np.int64)

    def solve(self, allowed: Collection[int], t: int, limit: int = 0,
              node_cap: int = 0) -> tuple[np.ndarray, int]:
        """Class-count vectors of all ``u`` with ``wt(u + c) + t`` admissible for every ``c`` in D.

        Returns ``(counts, nodes)`` where ``counts`` has one row per solution.
        With ``node_cap`` set the search stops early once that many nodes were visited
        (check ``nodes > node_cap``).
        """
        n = self.n
        ok = np.array([(v + t) in allowed for v in range(n + 1)], dtype=bool)
        s0 = np.array([s for s in range(len(self.nonpiv) + 1) if ok[s]], dtype=np.int64)
        stats = np.zeros(self.k + 3, dtype=np.int64)
        self.last_stats = stats
        if not len(s0):
            return np.zeros((0, 1 << self.k), np.int64), 0
        counts = kernels.lift_search(self.k, s0, self.P, self.offset, self.par, ok[None, :],
                                     stats, limit, node_cap)
        return counts, int(stats[0])

    def decode(self, counts: np.ndarray) -> np.ndarray:
        """0/1 array (rows = solutions) of the vectors ``u`` described by class counts."""
        u = np.zeros((len(counts), self.n), dtype=np.uint8)
        starts = self._class_start
        for z in np.flatnonzero(counts.any(axis=0)):
            for i in np.flatnonzero(counts[:, z]):
                c = counts[i, z]
                u[i, self._sorted_pos[starts[z]: starts[z] + c]] = 1
        return u

    def normalise(self, u: np.ndarray) -> np.ndarray:
        """Reduce vectors modulo D so that they vanish on the pivots."""
        if not self.k:
            return u
        coeff = u[:, self.piv].astype(np.int64)
        return ((u.astype(np.int64) + coeff @ self.gen_bits) & 1).astype(np.uint8)

    def counts_of(self, u: np.ndarray) -> np.ndarray:
        out = np.zeros((len(u), 1 << self.k), dtype=np.int64)
        if len(self.nonpiv):
            sub = u[:, self.nonpiv].astype(np.int64)
            np.add.at(out.T, self.np_cols, sub.T)
        return out

    def orbit_representatives(self, counts: np.ndarray, gens=None) -> list[int]:
        """Indices of one solution per orbit of Aut(D) acting on cosets."""
        if len(counts) <= 1:
            return list(range(len(counts)))
        if gens is None:
            gens = automorphism_generators(self.d) if self.n else []
        if not gens:
            return list(range(len(counts)))
        index = {row.tobytes(): i for i, row in enumerate(counts)}
        parent = list(range(len(counts)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        u = self.decode(counts)
        for g in gens:
            img = np.zeros_like(u)
            img[:, np.asarray(g)] = u
            img = self.normalise(img)
            for i, row in enumerate(self.counts_of(img)):
                j = index.get(row.tobytes())
                if j is None:
                    raise AssertionError("solution set not closed under automorphisms")
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return sorted({find(i) for i in range(len(counts))})

    def build(self, u_row: np.ndarray, t: int) -> BitMatrix:
        """Generator ``[[G_D, 0], [u, 1^t]]`` with the new row last."""
        n = self.n
        rows = tuple(self.d.gen.rows) + (bits_to_ints(u_row[None, :])[0] | (((1 << t) - 1) << n),)
        return BitMatrix(rows, n + t)


def lift_code(d: Code, allowed: Collection[int], t: int) -> list[BitMatrix]:
    """Every admissible one-dimension extension with ``t`` appended coordinates (no isomorph rejection)."""
    lf = CosetLifter(d)
    counts, _ = lf.solve(allowed, t)
    u = lf.decode(counts)
    return [lf.build(row, t) for row in u]


__all__ = ["CosetLifter", "lift_code", "next_allowed", "parity_table"]
