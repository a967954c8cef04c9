"""Inverting the residual construction.

A code with a weight-``w`` word ``c`` whose residual is ``R`` has, after
permuting coordinates and choosing the basis, the generator
``[[G_R, Y], [0, 1^w]]``. The columns of ``Y`` form a multiset of ``w`` points
of GF(2)^k (``k = dim R``); the message ``h`` yields words of weight
``wt(r_h) + m_h`` and ``wt(r_h) + w - m_h``, where ``m_h`` counts points with
odd inner product with ``h``. Translating every point by a fixed vector only
adds the last row to some basis rows, so multisets are taken up to translation.
"""

from __future__ import annotations

from collections.abc import Collection

import numpy as np

from ..canonical import automorphism_generators
from ..codes import Code
from ..gf2 import BitMatrix
from . import kernels
from .lift import parity_table


class ResidualLengthener:
    """All ways of lengthening ``r`` by ``w`` coordinates plus one dimension.

    Points are written in coordinates dual to the generator rows of ``r``.
    """

    def __init__(self, r: Code, w: int):
        self.r = r
        self.w = w
        self.k = r.k
        self.weights = r.weights.astype(np.int64)
        self.words = r.codewords()
        self._phimat = None

    def message_automorphisms(self, limit: int = 1 << 16) -> np.ndarray:
        """Linear maps of the message space induced by Aut(r), as images of the unit vectors.

        The group is listed by closure from the generators; past ``limit``
        elements the list is cut off (the search only prunes less).
        """
        if self._phimat is None:
            k = self.k
            index = {w: h for h, w in enumerate(self.words)}
            gens = []
            if k and self.r.full_length:
                for g in automorphism_generators(self.r):
                    gens.append(tuple(index[_move(self.words[1 << i], g)] for i in range(k)))
            ident = tuple(1 << i for i in range(k))
            seen = {ident}
            todo = [ident]
            while todo and len(seen) < limit:
                a = todo.pop()
                for g in gens:
                    b = tuple(_apply(a, x) for x in g)
                    if b not in seen:
                        seen.add(b)
                        todo.append(b)
            seen.discard(ident)
            self._phimat = np.array([ident, *sorted(seen)], dtype=np.int64).reshape(len(seen) + 1, k)
        return self._phimat

    def solve(self, allowed: Collection[int], max_mult: int | None = None, limit: int = 0,
              node_cap: int = 0, count_cap: int = 4, symmetries: bool = True,
              frontier_max: int = 4000) -> tuple[np.ndarray, np.ndarray]:
        """Multiplicity vectors of admissible ``Y``, with their directions.

        Row ``i`` of the first array gives point multiplicities in the
        coordinates set by the message directions in row ``i`` of the second.
        Every translation class is represented; with ``symmetries`` the
        automorphisms of the residual are factored out too (up to the
        truncation of the element lists, so some classes may repeat).

        The upper levels are expanded breadth first, keeping one node per
        orbit of the stabilizer of the span of its directions, until the
        frontier exceeds ``frontier_max``; each survivor is then searched
        depth first.
        """
        k, w = self.k, self.w
        M = 1 << k
        empty = np.zeros((0, M), np.int64), np.zeros((0, k), np.int64)
        self.last_stats = stats = np.zeros(2 * k + 4, dtype=np.int64)
        if w not in allowed:
            return empty
        rw = self.weights
        values = sorted(set(rw.tolist()))
        row_of = {v: i for i, v in enumerate(values)}
        wrow = np.array([row_of[v] for v in rw.tolist()], dtype=np.int64)
        ok = np.zeros((len(values), w + 1), dtype=bool)
        for i, v in enumerate(values):
            ok[i] = [(v + m) in allowed and (v + w - m) in allowed for m in range(w + 1)]
        mm = w if max_mult is None else max_mult
        cap = np.array([min(w, mm << (k - lvl)) for lvl in range(k + 1)], dtype=np.int64)
        if symmetries:
            phimat = self.message_automorphisms()
        else:
            phimat = (1 << np.arange(k, dtype=np.int64))[None, :]
        # log-scaled number of admissible splits per residual weight
        cost = np.round(16 * np.log2(np.maximum(ok.sum(axis=1), 1))).astype(np.int64)
        par = parity_table(k)

        def run(node, stop):
            q, d, g, perm = node
            budget = 0
            if node_cap:
                budget = node_cap - int(stats[0])
                if budget <= 0:
                    return empty
            res = kernels.lengthen_search(k, w, wrow, ok, cost, cap, par, phimat, q, d, g, perm,
                                          stop, stats, limit, budget, count_cap)
            if len(d):  # the root was already counted as a leaf of the previous stage
                stats[0] -= 1
                stats[2 + len(d)] -= 1
            return res

        sols_q, sols_d = [], []
        frontier = [(np.array([w], np.int64), np.zeros(0, np.int64),
                     np.arange(len(phimat), dtype=np.int64), np.zeros((len(phimat), 1), np.int64))]
        level = 0
        while level < k and len(frontier) <= frontier_max:
            level += 1
            found = []
            for node in frontier:
                qs, ds = run(node, level)
                found += [(q[:1 << level], d[:level]) for q, d in zip(qs, ds)]
            frontier = self._orbit_reps(found, phimat, par)
        if level == k:
            sols_q += [q for q, *_ in frontier]
            sols_d += [d for _, d, *_ in frontier]
        else:
            for node in frontier:
                qs, ds = run(node, 0)
                sols_q += list(qs)
                sols_d += list(ds)
        stats[1] = len(sols_q)
        if not sols_q:
            return empty
        return np.array(sols_q, np.int64), np.array(sols_d, np.int64).reshape(len(sols_d), k)

    def _orbit_reps(self, nodes, phimat, par):
        """One node per orbit of the automorphisms combined with translations.

        A node is its direction span ``V`` with the projection ``q`` written in
        a basis of ``V``. Each span is moved to the least span in its orbit
        (comparing sorted element lists) and written in its reduced basis;
        ``q`` is then minimized over the automorphisms realizing that move and
        all translations. Returns ``(q, dirs, g, perm)`` tuples where ``g``,
        ``perm`` list the elements fixing the representative.
        """
        groups: dict[tuple, list[np.ndarray]] = {}
        for q, d in nodes:
            groups.setdefault(tuple(int(v) for v in d), []).append(q)
        reps: dict[tuple, dict[bytes, np.ndarray]] = {}
        for dkey, qs in groups.items():
            basis, perm = self._to_least_span(dkey, phimat, par)
            bucket = reps.setdefault(basis, {})
            for q in qs:
                best = kernels.least_image(q, perm)
                bucket.setdefault(best.tobytes(), best)
        out = []
        for basis, bucket in reps.items():
            g, perm = self._span_stabilizer(basis, phimat, par)
            d = np.array(basis, np.int64)
            for best in bucket.values():
                fix = kernels.fixing_rows(best, perm)
                out.append((best.copy(), d, g[fix], perm[fix]))
        return out

    def _images(self, dirs, phimat: np.ndarray) -> np.ndarray:
        """Images of every span element of ``dirs`` under each automorphism (rows)."""
        k = self.k
        cols = [np.zeros(len(phimat), np.int64)]
        for v in dirs:
            sel = ((v >> np.arange(k)) & 1).astype(bool)
            img = np.bitwise_xor.reduce(phimat[:, sel], axis=1)
            cols += [c ^ img for c in cols]
        return np.stack(cols, axis=1)

    def _to_least_span(self, dirs: tuple, phimat: np.ndarray, par: np.ndarray):
        """Reduced basis of the least image of span(dirs), and the maps taking nodes there.

        For an automorphism ``g`` with ``g(span) = U`` the moved node has
        coordinate ``j`` equal to ``h_j . z``, where ``g(span[h_j])`` is basis
        vector ``j`` of ``U``; row ``e`` of the returned array lists, for each
        new coordinate vector, the old one it comes from (composed with a
        translation). Rows run over the automorphisms reaching the least span
        times all translations, so ``q[perm]`` are the moved nodes.
        """
        L = len(dirs)
        m = 1 << L
        img = self._images(dirs, phimat)
        srt = np.sort(img, axis=1)
        least = srt[np.lexsort(srt.T[::-1])[0]]
        hit = np.flatnonzero((srt == least).all(axis=1))
        basis = _reduced_basis(least.tolist())
        pos = np.full(1 << self.k, -1, np.int64)
        span = [0]
        for v in basis:
            span += [s ^ v for s in span]
        pos[np.array(span)] = np.arange(m)
        z = np.arange(m)
        rows = np.arange(len(hit))[:, None]
        src = np.zeros((len(hit), m), np.int64)
        src[rows, pos[img[hit]]] = z[None, :]
        lin = np.zeros((len(hit), m), np.int64)
        for j in range(L):
            lin |= par[src[:, 1 << j][:, None] & z[None, :]] << j
        back = np.zeros_like(lin)
        back[rows, lin] = z[None, :]
        perm = back[:, z[None, :] ^ z[:, None]].reshape(-1, m)
        return tuple(basis), perm

    def _span_stabilizer(self, dirs: tuple, phimat: np.ndarray, par: np.ndarray):
        """Elements (automorphism, affine map of GF(2)^L) keeping span(dirs), with every translation."""
        L = len(dirs)
        m = 1 << L
        pos = np.full(1 << self.k, -1, np.int64)
        span = [0]
        for v in dirs:
            span += [s ^ v for s in span]
        pos[np.array(span)] = np.arange(m)
        img = self._images(dirs, phimat)
        keep = np.flatnonzero((pos[img] >= 0).all(axis=1))
        z = np.arange(m)
        lin = np.zeros((len(keep), m), np.int64)
        for i in range(L):
            lin |= par[pos[img[keep, 1 << i]][:, None] & z[None, :]] << i
        perm = (lin[:, None, :] ^ z[None, :, None]).reshape(-1, m)
        return np.repeat(keep, m).astype(np.int64), perm

    def build(self, mult: np.ndarray, dirs: np.ndarray) -> BitMatrix:
        """Generator ``[[G, Y], [0, 1^w]]`` where ``G`` holds the words of ``r`` for ``dirs``."""
        r, w, k = self.r, self.w, self.k
        pts = [p for p in np.flatnonzero(mult) for _ in range(int(mult[p]))]
        n0 = r.n
        rows = []
        for i in range(k):
            y = 0
            for j, p in enumerate(pts):
                if (p >> i) & 1:
                    y |= 1 << j
            rows.append(self.words[int(dirs[i])] | (y << n0))
        rows.append(((1 << w) - 1) << n0)
        return BitMatrix(tuple(rows), n0 + w)


def _move(word: int, perm) -> int:
    out = 0
    for j, t in enumerate(perm):
        if (word >> j) & 1:
            out |= 1 << t
    return out


def _apply(images, h: int) -> int:
    out = 0
    i = 0
    while h:
        if h & 1:
            out ^= images[i]
        h >>= 1
        i += 1
    return out


def _reduced_basis(vectors) -> list[int]:
    """Basis of the span of ``vectors`` with distinct lowest bits, each absent from the others."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            if v & (b & -b):
                v ^= b
        if v:
            low = v & -v
            basis = [b ^ v if b & low else b for b in basis]
            basis.append(v)
    return sorted(basis, key=lambda b: b & -b)
