"""Bit-packed linear algebra over GF(2).

Vectors are Python ints with bit ``j`` holding coordinate ``j``. Matrices keep
their rows as ints; bulk work (codeword tables, weights) goes through numpy
arrays of uint64 words, so a row of length 96 occupies two machine words.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParseError

WORD = 64


def popcount(v: int) -> int:
    return v.bit_count()


def nwords(n: int) -> int:
    return max(1, (n + WORD - 1) // WORD)


def pack(vectors: Sequence[int], n: int) -> np.ndarray:
    """Pack int vectors into an ``(len, nwords(n))`` uint64 array."""
    w = nwords(n)
    out = np.zeros((len(vectors), w), dtype=np.uint64)
    mask = (1 << WORD) - 1
    for i, v in enumerate(vectors):
        for j in range(w):
            out[i, j] = (v >> (WORD * j)) & mask
    return out


def unpack(words: np.ndarray) -> list[int]:
    out = []
    for row in np.atleast_2d(words):
        v = 0
        for j in range(len(row) - 1, -1, -1):
            v = (v << WORD) | int(row[j])
        out.append(v)
    return out


def bits_to_ints(a: np.ndarray) -> list[int]:
    """Rows of a 0/1 array as ints (entry ``j`` becomes bit ``j``)."""
    a = np.asarray(a, dtype=np.uint8)
    if a.shape[0] == 0:
        return []
    packed = np.packbits(a, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def ints_to_bits(vectors: Sequence[int], n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    buf = b"".join(v.to_bytes(nbytes, "little") for v in vectors)
    raw = np.frombuffer(buf, dtype=np.uint8).reshape(len(vectors), nbytes)
    return np.unpackbits(raw, axis=1, bitorder="little", count=n)


def row_weights(words: np.ndarray) -> np.ndarray:
    """Hamming weight of every packed row."""
    return np.bitwise_count(words).sum(axis=1, dtype=np.int64)


@dataclass(frozen=True)
class BitMatrix:
    """Row-major matrix over GF(2); ``rows[i]`` bit ``j`` is entry (i, j)."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row wider than ncols")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "BitMatrix":
        lines = [s.strip() for s in lines]
        lines = [s for s in lines if s]
        if not lines:
            raise ParseError("empty matrix")
        n = len(lines[0])
        rows = []
        for s in lines:
            if len(s) != n:
                raise ParseError(f"ragged row: expected {n} columns, got {len(s)}")
            if set(s) - {"0", "1"}:
                raise ParseError(f"invalid character in row {s!r}")
            rows.append(int(s[::-1], 2))
        return cls(tuple(rows), n)

    @classmethod
    def from_array(cls, a) -> "BitMatrix":
        a = np.asarray(a, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(tuple(bits_to_ints(a)), a.shape[1])

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def empty(cls, n: int) -> "BitMatrix":
        return cls((), n)

    def to_array(self) -> np.ndarray:
        return ints_to_bits(self.rows, self.ncols)

    def to_strings(self) -> list[str]:
        return [format(r, f"0{self.ncols}b")[::-1] if self.ncols else "" for r in self.rows]

    def __str__(self) -> str:
        return "\n".join(self.to_strings())

    def packed(self) -> np.ndarray:
        return pack(self.rows, self.ncols)

    def column(self, j: int) -> int:
        """Column ``j`` as an int whose bit ``i`` is entry (i, j)."""
        v = 0
        for i, r in enumerate(self.rows):
            v |= ((r >> j) & 1) << i
        return v

    def columns(self) -> list[int]:
        return bits_to_ints(self.to_array().T) if self.ncols else []

    def permute_columns(self, perm: Sequence[int]) -> "BitMatrix":
        """New matrix whose column ``p`` is old column ``perm[p]``."""
        if sorted(perm) != list(range(self.ncols)):
            raise ValueError("not a permutation")
        return BitMatrix(tuple(bits_to_ints(self.to_array()[:, list(perm)])), self.ncols)

    def select_columns(self, cols: Sequence[int]) -> "BitMatrix":
        return BitMatrix(tuple(bits_to_ints(self.to_array()[:, list(cols)])), len(cols))

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if other.ncols != self.ncols:
            raise ValueError("column count mismatch")
        return BitMatrix(self.rows + other.rows, self.ncols)


def rref(m: BitMatrix) -> tuple[BitMatrix, int]:
    """Reduced row-echelon form with leftmost pivots; zero rows dropped."""
    rows = [r for r in m.rows if r]
    pivots: list[int] = []
    basis: list[int] = []
    for r in rows:
        for p, b in zip(pivots, basis):
            if (r >> p) & 1:
                r ^= b
        if not r:
            continue
        p = (r & -r).bit_length() - 1
        for i, b in enumerate(basis):
            if (b >> p) & 1:
                basis[i] = b ^ r
        pivots.append(p)
        basis.append(r)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    out = BitMatrix(tuple(basis[i] for i in order), m.ncols)
    return out, len(basis)


def rank(m: BitMatrix) -> int:
    return rref(m)[1]


def pivots(m: BitMatrix) -> list[int]:
    """Pivot columns of a matrix already in RREF."""
    return [(r & -r).bit_length() - 1 for r in m.rows]


def reduce_vector(v: int, rref_rows: Sequence[int], pivot_cols: Sequence[int]) -> int:
    """Remainder of ``v`` modulo the row space of an RREF matrix."""
    for p, b in zip(pivot_cols, rref_rows):
        if (v >> p) & 1:
            v ^= b
    return v


def in_row_space(v: int, m: BitMatrix) -> bool:
    r, _ = rref(m)
    return reduce_vector(v, r.rows, pivots(r)) == 0


def same_row_space(a: BitMatrix, b: BitMatrix) -> bool:
    return a.ncols == b.ncols and rref(a)[0] == rref(b)[0]


def nullspace_basis(m: BitMatrix) -> BitMatrix:
    """Basis (in RREF) of ``{v : m v^T = 0}``."""
    r, k = rref(m)
    n = m.ncols
    piv = pivots(r)
    pivset = set(piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = 1 << f
        for p, row in zip(piv, r.rows):
            if (row >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return rref(BitMatrix(tuple(basis), n))[0]


def iterate_codewords(g: BitMatrix) -> Iterator[int]:
    """All ``2**k`` row-space vectors in Gray-code order (one XOR per step)."""
    v = 0
    yield v
    for i in range(1, 1 << g.nrows):
        v ^= g.rows[(i & -i).bit_length() - 1]
        yield v


def codeword_table(g: BitMatrix) -> np.ndarray:
    """Packed table of all codewords; row ``m`` is the combination with message bits ``m``.

    Built by doubling, so the table costs one vector XOR per codeword.
    """
    w = nwords(g.ncols)
    table = np.zeros((1 << g.nrows, w), dtype=np.uint64)
    rows = g.packed()
    for i in range(g.nrows):
        h = 1 << i
        np.bitwise_xor(table[:h], rows[i], out=table[h:2 * h])
    return table


def parse_matrix(text: str) -> BitMatrix:
    """Parse the '0'/'1' row format; '#' lines are comments."""
    lines = []
    for raw in text.splitlines():
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        lines.append(s)
    if not lines:
        raise ParseError("no matrix rows found")
    return BitMatrix.from_strings(lines)


def format_matrix(m: BitMatrix, comments: Sequence[str] = ()) -> str:
    head = "".join(f"# {c}\n" for c in comments)
    return head + "".join(s + "\n" for s in m.to_strings())
