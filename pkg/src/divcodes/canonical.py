"""Equivalence of binary codes under coordinate permutation.

Partition refinement runs on the incidence structure between coordinates and
a spanning set of codewords (the lightest weight classes). A permutation of
coordinates preserving that word set preserves the code, so the search tree
over individualized coordinates yields both the automorphism group and a
canonical form.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import gf2
from .codes import Code
from .errors import NotFullLength
from .gf2 import BitMatrix

_SHIFT = np.int64(1 << 34)
_MAX_WORDS_K = 20


@dataclass(frozen=True)
class CanonicalLabel:
    canonical_gen: BitMatrix
    aut_order: int
    certificate: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    def to_text(self) -> str:
        return gf2.format_matrix(self.canonical_gen) + f"aut_order {self.aut_order}\n"

    def key(self) -> str:
        """Single-line form used by dedup stores."""
        g = self.canonical_gen
        return f"{g.ncols}:" + ",".join(format(r, "x") for r in g.rows)


@dataclass
class _Node:
    col: np.ndarray
    word: np.ndarray
    trace: bytes

    @property
    def ncells(self) -> int:
        return int(self.col.max()) + 1 if len(self.col) else 0


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int):
        a, b = self.find(a), self.find(b)
        if a != b:
            if a < b:
                self.parent[b] = a
            else:
                self.parent[a] = b

    def add_perm(self, g: Sequence[int]):
        for i, j in enumerate(g):
            self.union(i, j)


def _spanning_word_set(code: Code) -> np.ndarray:
    """Indices of codewords in the lightest weight classes that together span the code."""
    w = code.weights
    chosen = np.zeros(0, dtype=np.int64)
    for wt in code.nonzero_weights():
        idx = np.flatnonzero(w == wt)
        chosen = np.concatenate([chosen, idx])
        rows = tuple(gf2.unpack(code.table[chosen]))
        if gf2.rank(BitMatrix(rows, code.n)) == code.k:
            break
    return chosen


class CodeSearchTree:
    """Refinement/individualization tree of a full-length code."""

    def __init__(self, code: Code):
        if not code.full_length:
            raise NotFullLength("canonical labelling needs a full-length code")
        if code.k > _MAX_WORDS_K:
            raise ValueError(f"dimension {code.k} too large for codeword enumeration")
        self.code = code
        n = code.n
        self.n = n
        idx = _spanning_word_set(code) if code.k else np.zeros(0, np.int64)
        bits = gf2.ints_to_bits(gf2.unpack(code.table[idx]), n) if len(idx) else np.zeros((0, n), np.uint8)
        self.M = bits.astype(np.int64)
        self.MT = np.ascontiguousarray(self.M.T)
        rng = np.random.default_rng(0x5EED)
        self.rc = rng.integers(1, 1 << 20, size=n + 2, dtype=np.int64)
        self.rw = rng.integers(1, 1 << 20, size=len(idx) + 2, dtype=np.int64)
        wts = code.weights[idx]
        _, word0 = np.unique(wts, return_inverse=True)
        self.word0 = word0.astype(np.int64)
        self.gen_bits = code.gen.to_array().astype(np.int64)
        self.pivots = code.pivots

    # refinement -------------------------------------------------------
    def refine(self, col: np.ndarray, word: np.ndarray) -> _Node:
        h = hashlib.blake2b(digest_size=16)
        nc = int(col.max()) + 1 if len(col) else 0
        nw = int(word.max()) + 1 if len(word) else 0
        while True:
            if len(word):
                wk = word * _SHIFT + self.M @ self.rc[col]
                uw, word = np.unique(wk, return_inverse=True)
                ck = col * _SHIFT + self.MT @ self.rw[word]
            else:
                uw = np.zeros(0, np.int64)
                ck = col.astype(np.int64)
            uc, col = np.unique(ck, return_inverse=True)
            h.update(uw.tobytes())
            h.update(uc.tobytes())
            if len(uc) == nc and len(uw) == nw:
                break
            nc, nw = len(uc), len(uw)
        h.update(np.bincount(col).tobytes())
        return _Node(col.astype(np.int64), word.astype(np.int64), h.digest())

    def root(self) -> _Node:
        return self.refine(np.zeros(self.n, np.int64), self.word0.copy())

    def individualize(self, node: _Node, v: int) -> _Node:
        col = node.col * 2 + 1
        col[v] -= 1
        _, col = np.unique(col, return_inverse=True)
        return self.refine(col.astype(np.int64), node.word)

    @staticmethod
    def target_cell(node: _Node) -> int | None:
        counts = np.bincount(node.col)
        multi = np.flatnonzero(counts > 1)
        if not len(multi):
            return None
        return int(multi[np.argmin(counts[multi])])

    @staticmethod
    def labelling(node: _Node) -> np.ndarray:
        """Position -> coordinate for a discrete partition."""
        return np.argsort(node.col, kind="stable")

    def is_automorphism(self, g: Sequence[int]) -> bool:
        img = np.zeros_like(self.gen_bits)
        img[:, np.asarray(g)] = self.gen_bits
        coeff = img[:, self.pivots]
        rem = (img + coeff @ self.gen_bits) & 1
        return not rem.any()

    # automorphism group ----------------------------------------------
    @cached_property
    def first_path(self) -> list[tuple[_Node, int | None, int | None]]:
        """(node, target cell, chosen coordinate) per level; leaf last."""
        path = []
        node = self.root()
        while True:
            cell = self.target_cell(node)
            if cell is None:
                path.append((node, None, None))
                return path
            v = int(np.flatnonzero(node.col == cell)[0])
            path.append((node, cell, v))
            node = self.individualize(node, v)

    def _leaf_perm(self, leaf: _Node) -> list[int]:
        lam0 = self.labelling(self.first_path[-1][0])
        lam = self.labelling(leaf)
        g = [0] * self.n
        for a, b in zip(lam0, lam):
            g[int(a)] = int(b)
        return g

    def _dfs_aut(self, level: int, node: _Node) -> list[int] | None:
        path = self.first_path
        if level == len(path) - 1:
            g = self._leaf_perm(node)
            return g if self.is_automorphism(g) else None
        _, cell, _ = path[level]
        for x in np.flatnonzero(node.col == cell):
            child = self.individualize(node, int(x))
            if child.trace != path[level + 1][0].trace:
                continue
            g = self._dfs_aut(level + 1, child)
            if g is not None:
                return g
        return None

    @cached_property
    def automorphisms(self) -> tuple[list[list[int]], int]:
        """Generators and order of the automorphism group."""
        path = self.first_path
        gens: list[list[int]] = []
        order = 1
        for level in range(len(path) - 2, -1, -1):
            node, cell, b = path[level]
            uf = _UnionFind(self.n)
            for g in gens:
                uf.add_perm(g)
            for c in np.flatnonzero(node.col == cell):
                c = int(c)
                if uf.find(c) == uf.find(b):
                    continue
                child = self.individualize(node, c)
                if child.trace != path[level + 1][0].trace:
                    continue
                g = self._dfs_aut(level + 1, child)
                if g is not None:
                    gens.append(g)
                    uf.add_perm(g)
            root = uf.find(b)
            order *= sum(1 for x in range(self.n) if uf.find(x) == root)
        return gens, order

    # canonical form --------------------------------------------------
    @cached_property
    def _group(self):
        from sympy.combinatorics import Permutation, PermutationGroup

        gens, _ = self.automorphisms
        return PermutationGroup([Permutation(g) for g in gens]) if gens else None

    def _stabilizer_orbit_reps(self, prefix: tuple[int, ...], cache: dict) -> list[int]:
        """Orbit representative of every coordinate under the pointwise stabilizer of ``prefix``."""
        if prefix in cache:
            return cache[prefix]
        reps = list(range(self.n))
        grp = self._group
        if grp is not None:
            stab = grp.pointwise_stabilizer(list(prefix)) if prefix else grp
            for orb in stab.orbits():
                m = min(orb)
                for x in orb:
                    reps[x] = m
        cache[prefix] = reps
        return reps

    def canonical(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(canonical RREF rows, labelling) minimising (traces, rows) over the tree."""
        best: list = [None]
        cache: dict = {}
        gen = self.code.gen

        def visit(node: _Node, prefix: tuple[int, ...], traces: tuple[bytes, ...]):
            if best[0] is not None:
                bt = best[0][0][:len(traces)]
                if traces > bt:
                    return
            cell = self.target_cell(node)
            if cell is None:
                lam = tuple(int(x) for x in self.labelling(node))
                rows = gf2.rref(gen.permute_columns(lam))[0].rows
                key = (traces, rows)
                if best[0] is None or key < best[0][:2]:
                    best[0] = (traces, rows, lam)
                return
            reps = self._stabilizer_orbit_reps(prefix, cache)
            seen = set()
            for x in np.flatnonzero(node.col == cell):
                x = int(x)
                r = reps[x]
                if r in seen:
                    continue
                seen.add(r)
                child = self.individualize(node, x)
                visit(child, prefix + (x,), traces + (child.trace,))

        root = self.root()
        visit(root, (), (root.trace,))
        _, rows, lam = best[0]
        return rows, lam


def _trivial_label(code: Code) -> CanonicalLabel:
    return CanonicalLabel(code.gen, 1, tuple(range(code.n)))


def canonical_label(code: Code) -> CanonicalLabel:
    if not code.full_length:
        raise NotFullLength("canonical labelling needs a full-length code")
    if code.n == 0:
        return _trivial_label(code)
    tree = CodeSearchTree(code)
    gens, order = tree.automorphisms
    rows, lam = tree.canonical()
    return CanonicalLabel(BitMatrix(rows, code.n), order, lam, tuple(tuple(g) for g in gens))


def aut_group_order(code: Code) -> int:
    if not code.full_length:
        raise NotFullLength("automorphism group needs a full-length code")
    if code.n == 0:
        return 1
    return CodeSearchTree(code).automorphisms[1]


def automorphism_generators(code: Code) -> list[list[int]]:
    if not code.full_length:
        raise NotFullLength("automorphism group needs a full-length code")
    if code.n == 0:
        return []
    return CodeSearchTree(code).automorphisms[0]


def are_equivalent(a: Code, b: Code) -> bool:
    if not (a.full_length and b.full_length):
        raise NotFullLength("equivalence test needs full-length codes")
    if (a.n, a.k) != (b.n, b.k) or a.weight_enumerator != b.weight_enumerator:
        return False
    if sorted(_column_multiplicities(a)) != sorted(_column_multiplicities(b)):
        return False
    return canonical_label(a).canonical_gen == canonical_label(b).canonical_gen


def _column_multiplicities(c: Code) -> list[int]:
    from collections import Counter

    return list(Counter(c.column_vectors).values())
