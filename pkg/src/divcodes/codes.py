"""Binary linear codes and their invariants."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import gf2
from .errors import (
    NotACodeword,
    NotFullLength,
    ParseError,
    PointAbsent,
    ZeroDimensional,
)
from .gf2 import BitMatrix


@dataclass(frozen=True)
class WeightEnumerator:
    """Exact weight distribution ``coeffs[i]`` = number of weight-``i`` codewords."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def from_dict(cls, n: int, d: Mapping[int, int]) -> "WeightEnumerator":
        c = [0] * (n + 1)
        for i, a in d.items():
            c[i] += a
        return cls(tuple(c))

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def total(self) -> int:
        return sum(self.coeffs)

    def support(self) -> list[int]:
        """Weights that occur."""
        return [i for i, a in enumerate(self.coeffs) if a]

    def nonzero_weights(self) -> list[int]:
        return [i for i in self.support() if i > 0]

    def as_dict(self) -> dict[int, int]:
        return {i: a for i, a in enumerate(self.coeffs) if a}

    def to_lines(self) -> str:
        return "".join(f"{i} {a}\n" for i, a in enumerate(self.coeffs) if a)

    @classmethod
    def from_lines(cls, text: str, n: int) -> "WeightEnumerator":
        d = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"bad enumerator line {line!r}")
            d[int(parts[0])] = int(parts[1])
        if d and max(d) > n:
            raise ParseError("weight exceeds length")
        return cls.from_dict(n, d)

    def polynomial(self) -> str:
        n = self.n
        return " + ".join(f"{a}x^{i}y^{n - i}" for i, a in enumerate(self.coeffs) if a)


@dataclass(frozen=True)
class PointMultiset:
    """Columns of a generator matrix read as points of GF(2)^dim (ints)."""

    points: Mapping[int, int]
    dim: int

    def __post_init__(self):
        pts = {int(p): int(m) for p, m in self.points.items() if m}
        for p, m in pts.items():
            if p <= 0 or p >= 1 << self.dim:
                raise ValueError(f"point {p} outside GF(2)^{self.dim} minus 0")
            if m < 0:
                raise ValueError("negative multiplicity")
        object.__setattr__(self, "points", dict(sorted(pts.items())))

    @property
    def cardinality(self) -> int:
        return sum(self.points.values())

    def multiplicity(self, p: int) -> int:
        return self.points.get(p, 0)

    def shape(self) -> dict[int, int]:
        """Map multiplicity -> number of points having it."""
        return dict(sorted(Counter(self.points.values()).items()))

    @property
    def a2_star(self) -> int:
        """Contribution of repeated points to the dual weight-2 count."""
        return sum(math.comb(m, 2) for m in self.points.values())

    def to_matrix(self) -> BitMatrix:
        cols = [p for p, m in self.points.items() for _ in range(m)]
        a = gf2.ints_to_bits(cols, self.dim).T if cols else np.zeros((self.dim, 0), np.uint8)
        return BitMatrix.from_array(a) if self.dim else BitMatrix((), len(cols))

    def to_code(self) -> "Code":
        return Code(self.to_matrix())


class Code:
    """Binary linear code given by any generator matrix; stored in RREF."""

    def __init__(self, gen: BitMatrix | Sequence[str]):
        if not isinstance(gen, BitMatrix):
            gen = BitMatrix.from_strings(gen)
        self.gen, _ = gf2.rref(gen)

    @classmethod
    def from_text(cls, text: str) -> "Code":
        return cls(gf2.parse_matrix(text))

    @property
    def n(self) -> int:
        return self.gen.ncols

    @property
    def k(self) -> int:
        return self.gen.nrows

    def __repr__(self) -> str:
        return f"Code[{self.n},{self.k}]"

    def __eq__(self, other) -> bool:
        return isinstance(other, Code) and self.gen == other.gen

    def __hash__(self) -> int:
        return hash(self.gen)

    @cached_property
    def pivots(self) -> list[int]:
        return gf2.pivots(self.gen)

    @cached_property
    def table(self) -> np.ndarray:
        """Packed codewords, index = message bits."""
        return gf2.codeword_table(self.gen)

    @cached_property
    def weights(self) -> np.ndarray:
        return gf2.row_weights(self.table)

    def codewords(self) -> list[int]:
        return gf2.unpack(self.table)

    @cached_property
    def weight_enumerator(self) -> WeightEnumerator:
        return WeightEnumerator(tuple(np.bincount(self.weights, minlength=self.n + 1)))

    def contains(self, v: int) -> bool:
        return gf2.reduce_vector(v, self.gen.rows, self.pivots) == 0

    @cached_property
    def support_mask(self) -> int:
        s = 0
        for r in self.gen.rows:
            s |= r
        return s

    @property
    def effective_length(self) -> int:
        return self.support_mask.bit_count()

    @property
    def full_length(self) -> bool:
        return self.effective_length == self.n

    @cached_property
    def column_vectors(self) -> list[int]:
        return self.gen.columns()

    @property
    def projective(self) -> bool:
        """No zero column and no repeated column, i.e. dual distance at least 3."""
        cols = self.column_vectors
        return 0 not in cols and len(set(cols)) == len(cols)

    def nonzero_weights(self) -> list[int]:
        return self.weight_enumerator.nonzero_weights()

    def dual(self) -> "Code":
        return Code(gf2.nullspace_basis(self.gen))

    def compact(self) -> "Code":
        """Drop identically-zero coordinates."""
        keep = [j for j in range(self.n) if (self.support_mask >> j) & 1]
        return Code(self.gen.select_columns(keep))

    def permute(self, perm: Sequence[int]) -> "Code":
        return Code(self.gen.permute_columns(perm))


def weight_enumerator(c: Code) -> WeightEnumerator:
    return c.weight_enumerator


def minimum_distance(c: Code) -> int:
    if c.k == 0:
        raise ZeroDimensional("minimum distance of a zero-dimensional code")
    return c.nonzero_weights()[0]


def weight_gcd(c: Code) -> int:
    if c.k == 0:
        raise ZeroDimensional("divisibility of a zero-dimensional code")
    return math.gcd(*c.nonzero_weights())


def divisibility(c: Code) -> int:
    """Largest power of two dividing every nonzero weight."""
    g = weight_gcd(c)
    return g & -g


def dual_distance_by_enumeration(c: Code) -> int | None:
    """Minimum distance of the dual by listing it; None when the dual is zero."""
    d = c.dual()
    return minimum_distance(d) if d.k else None


def _require_codeword(c: Code, w: int):
    if not c.contains(w):
        raise NotACodeword("vector is not a codeword")


def _restrict(c: Code, mask: int) -> Code:
    rows = tuple(r & mask for r in c.gen.rows)
    return Code(BitMatrix(rows, c.n))


def residual(c: Code, w: int, compact: bool = False) -> Code:
    """Codewords restricted to the complement of ``supp(w)``.

    Coordinates in the support stay in place as zero columns unless
    ``compact`` is set; the effective length is ``n - wt(w)`` either way.
    """
    _require_codeword(c, w)
    r = _restrict(c, ((1 << c.n) - 1) & ~w)
    return r.compact() if compact else r


def restriction_to_support(c: Code, w: int) -> Code:
    """Codewords restricted to ``supp(w)``; length ``wt(w)``."""
    _require_codeword(c, w)
    cols = [j for j in range(c.n) if (w >> j) & 1]
    return Code(c.gen.select_columns(cols))


def puncture(c: Code, col: int) -> Code:
    if not 0 <= col < c.n:
        raise IndexError(f"column {col} out of range for length {c.n}")
    return Code(c.gen.select_columns([j for j in range(c.n) if j != col]))


def shorten(c: Code, col: int) -> Code:
    if not 0 <= col < c.n:
        raise IndexError(f"column {col} out of range for length {c.n}")
    rows = list(c.gen.rows)
    hit = [r for r in rows if (r >> col) & 1]
    keep = [r for r in rows if not (r >> col) & 1]
    if hit:
        keep += [r ^ hit[0] for r in hit[1:]]
    sub = Code(BitMatrix(tuple(keep), c.n))
    return puncture(sub, col)


def point_multiset(c: Code) -> PointMultiset:
    if not c.full_length:
        raise NotFullLength("code has a zero coordinate")
    return PointMultiset(Counter(c.column_vectors), c.k)


def _drop_bit(v: int, b: int) -> int:
    low = v & ((1 << b) - 1)
    return low | ((v >> (b + 1)) << b)


def project_through_point(ps: PointMultiset, p: int) -> PointMultiset:
    """Image in the quotient GF(2)^dim / <p>; the pivot (lowest) bit of ``p`` is eliminated."""
    if ps.multiplicity(p) == 0:
        raise PointAbsent(f"point {p} has multiplicity 0")
    b = (p & -p).bit_length() - 1
    out: Counter = Counter()
    for q, m in ps.points.items():
        if q == p:
            continue
        if (q >> b) & 1:
            q ^= p
        out[_drop_bit(q, b)] += m
    return PointMultiset(out, ps.dim - 1)


def subcode_by_messages(c: Code, functional: int) -> Code:
    """Hyperplane subcode ``{mG : <m, functional> = 0}``."""
    rows = []
    anchor = None
    for i, r in enumerate(c.gen.rows):
        if (functional >> i) & 1:
            if anchor is None:
                anchor = r
            else:
                rows.append(r ^ anchor)
        else:
            rows.append(r)
    return Code(BitMatrix(tuple(rows), c.n))


def codes_from_rows(rows: Iterable[str]) -> Code:
    return Code(BitMatrix.from_strings(rows))
