"""Exact identities relating a binary code to its dual, and nodal-surface bounds.

All arithmetic is integer or :class:`fractions.Fraction`; nothing here touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .codes import Code, WeightEnumerator
from .errors import Inapplicable, NotAnEnumerator


def krawtchouk(j: int, i: int, n: int) -> int:
    """K_j(i; n) = sum_s (-1)^s C(i, s) C(n - i, j - s)."""
    return sum((-1) ** s * comb(i, s) * comb(n - i, j - s) for s in range(0, min(i, j) + 1))


def macwilliams_dual(w: WeightEnumerator, k: int) -> WeightEnumerator:
    """Weight enumerator of the dual of an ``[n, k]`` code with enumerator ``w``."""
    n = w.n
    if w.total() != 1 << k:
        raise NotAnEnumerator(f"coefficients sum to {w.total()}, expected 2^{k}")
    support = [(i, a) for i, a in enumerate(w.coeffs) if a]
    out = []
    for j in range(n + 1):
        s = sum(a * krawtchouk(j, i, n) for i, a in support)
        q, r = divmod(s, 1 << k)
        if r or q < 0:
            raise NotAnEnumerator(f"dual coefficient {j} is {Fraction(s, 1 << k)}")
        out.append(q)
    return WeightEnumerator(tuple(out))


@dataclass(frozen=True)
class MomentSystem:
    n: int
    k: int
    a: WeightEnumerator
    a_star_2: int
    a_star_3: int
    a_star_1: int = 0

    @classmethod
    def from_code(cls, c: Code) -> "MomentSystem":
        """Dual counts are read off the MacWilliams transform, never enumerated."""
        dual = macwilliams_dual(c.weight_enumerator, c.k)
        return cls(c.n, c.k, c.weight_enumerator, dual[2], dual[3], dual[1])


def power_moments_check(ms: MomentSystem) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Left minus right side of the first four power moments; all zero when consistent.

    With ``a_star_1 = 0`` these are the familiar full-length forms; a nonzero
    ``a_star_1`` switches to the general identities.
    """
    n, k = ms.n, ms.k
    a = ms.a
    b1, b2, b3 = ms.a_star_1, ms.a_star_2, ms.a_star_3
    p = Fraction(2) ** k
    m0 = sum(a[i] for i in range(1, n + 1))
    m1 = sum(i * a[i] for i in range(n + 1))
    m2 = sum(i * i * a[i] for i in range(n + 1))
    m3 = sum(i ** 3 * a[i] for i in range(n + 1))
    r0 = m0 - (p - 1)
    r1 = m1 - p / 2 * (n - b1)
    r2 = m2 - p / 4 * (n * (n + 1) - 2 * n * b1 + 2 * b2)
    r3 = m3 - p / 8 * (n * n * (n + 3) - (3 * n * n + 3 * n - 2) * b1 + 6 * n * b2 - 6 * b3)
    return (Fraction(r0), Fraction(r1), Fraction(r2), Fraction(r3))


def a40_closed_form(n, a2s=0, a3s=0, a56=0, a64=0) -> Fraction:
    """a_40 of an 8-divisible [n, 12, >=24] code solved from the first four moments."""
    n = Fraction(n)
    return (Fraction(205, 2) * n ** 2 - 6808 * n - n ** 3 / 2 + (208 - 3 * n) * a2s
            + 3 * a3s + 6 * a56 + 20 * a64 + 147420)


def a40_plus_a48_closed_form(n, a2s=0, a3s=0, a56=0, a64=0) -> Fraction:
    n = Fraction(n)
    return (71 * n ** 2 - Fraction(14504, 3) * n - n ** 3 / 3 + (144 - 2 * n) * a2s
            + 2 * a3s + 2 * a56 + 10 * a64 + 106470)


def solve_moments_for(n: int, k: int, weights: list[int], fixed: dict[int, int],
                      a2s: int = 0, a3s: int = 0) -> dict[int, Fraction]:
    """Solve the four moment equations for four unknown coefficients.

    ``weights`` names the unknowns, ``fixed`` gives every other nonzero
    coefficient. Used as an independent check of the closed forms.
    """
    import sympy

    if len(weights) != 4:
        raise ValueError("need exactly four unknowns")
    xs = sympy.symbols("x0:4")
    known = dict(fixed)
    p = sympy.Integer(2) ** k
    rows = []
    for r in range(4):
        lhs = sum(sympy.Integer(w) ** r * x for w, x in zip(weights, xs))
        lhs += sum(sympy.Integer(w) ** r * a for w, a in known.items())
        rows.append(lhs)
    eqs = [
        sympy.Eq(rows[0], p - 1),
        sympy.Eq(rows[1], p / 2 * n),
        sympy.Eq(rows[2], p / 2 * (a2s + sympy.Rational(n * (n + 1), 2))),
        sympy.Eq(rows[3], p / 4 * (3 * (a2s * n - a3s) + sympy.Rational(n * n * (n + 3), 2))),
    ]
    sol = sympy.solve(eqs, xs, dict=True)[0]
    return {w: Fraction(int(sympy.numer(sol[x])), int(sympy.denom(sol[x]))) for w, x in zip(weights, xs)}


@dataclass(frozen=True)
class SurfaceConstraint:
    """Coding-theoretic constraints on the code of a nodal surface of degree ``s`` with ``m`` nodes."""

    s: int
    m: int
    k_min: int
    d_min: int
    divisibility: int


def _ceil_half(x: int) -> int:
    return -((-x) // 2)


def nodal_code_constraints(s: int, m: int) -> SurfaceConstraint:
    if s < 1 or m < 0:
        raise ValueError("need s >= 1 and m >= 0")
    k_min = m - _ceil_half(s ** 3) + 2 * s * s - 3 * s + 1
    d_min = 2 * _ceil_half(s * (s - 2))
    div = 4 if s % 2 else 8
    return SurfaceConstraint(s, m, k_min, d_min, div)


def satisfies_surface_constraint(c: Code, sc: SurfaceConstraint) -> bool:
    """Weights at least ``d_min`` and divisible as required (dimension not checked)."""
    ws = c.nonzero_weights()
    return all(w >= sc.d_min and w % sc.divisibility == 0 for w in ws)


def dual_transform_params(n: int, k: int, alpha, beta) -> tuple[Fraction, Fraction]:
    """Length ``128*alpha*n + 255*beta`` and distance ``64*(alpha*n + 2*beta)``.

    Only the parameter arithmetic of the projective dual transform of an
    ``[n, 8]`` code is provided; it applies while ``n < 2^k - 1``.
    """
    if n >= (1 << k) - 1:
        raise Inapplicable(f"n = {n} is not below 2^{k} - 1")
    alpha, beta = Fraction(alpha), Fraction(beta)
    return 128 * alpha * n + 255 * beta, 64 * (alpha * n + 2 * beta)
