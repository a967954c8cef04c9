import itertools
from collections import Counter
from math import comb

import pytest

from divcodes import fixtures
from divcodes.canonical import are_equivalent
from divcodes.codes import (
    Code,
    PointMultiset,
    WeightEnumerator,
    divisibility,
    dual_distance_by_enumeration,
    minimum_distance,
    point_multiset,
    project_through_point,
    puncture,
    residual,
    restriction_to_support,
    shorten,
    subcode_by_messages,
    weight_gcd,
)
from divcodes.errors import NotACodeword, NotFullLength, PointAbsent, ZeroDimensional
from divcodes.gf2 import BitMatrix
from divcodes.identities import macwilliams_dual

from conftest import random_code


def rep(n):
    return Code(BitMatrix(((1 << n) - 1,), n))


def test_enumerator_examples(fx):
    assert fx("kummer16").weight_enumerator.as_dict() == {0: 1, 8: 30, 16: 1}
    assert fx("code65_12").weight_enumerator.as_dict() == {0: 1, 24: 390, 32: 3055, 40: 650}
    assert Code(BitMatrix.empty(7)).weight_enumerator.as_dict() == {0: 1}
    assert fx("septic96_10").weight_enumerator.as_dict() == {0: 1, 44: 504, 48: 124, 52: 336, 60: 56, 64: 3}


def test_enumerator_totals_all_fixtures(fx):
    for fid in fixtures.ids():
        c = fx(fid)
        e = c.weight_enumerator
        assert e.total() == 2 ** c.k and e[0] == 1 and min(e) >= 0


def test_enumerator_serialization():
    e = WeightEnumerator.from_dict(16, {0: 1, 8: 30, 16: 1})
    assert e.to_lines() == "0 1\n8 30\n16 1\n"
    assert WeightEnumerator.from_lines(e.to_lines(), 16) == e


def test_minimum_distance(fx):
    assert minimum_distance(fx("quintic31")) == 16
    assert minimum_distance(Code(BitMatrix.identity(5))) == 1
    assert minimum_distance(fx("code64_13")) == 24
    with pytest.raises(ZeroDimensional):
        minimum_distance(Code(BitMatrix.empty(3)))


def test_divisibility(fx):
    assert divisibility(fx("kummer16")) == 8
    assert divisibility(fx("quintic31")) == 16
    assert divisibility(Code(BitMatrix.identity(3))) == 1
    assert weight_gcd(Code(["111000", "000111"])) == 3
    assert divisibility(Code(["111000", "000111"])) == 1
    with pytest.raises(ZeroDimensional):
        divisibility(Code(BitMatrix.empty(3)))


def test_residual_of_weight40_words(fx):
    c = fx("code65_12")
    want = {0: 1, 4: 3, 8: 258, 12: 1278, 16: 493, 20: 15}
    for w in [w for w in c.codewords() if w.bit_count() == 40][:25]:
        r = residual(c, w)
        assert r.n == 65 and r.effective_length == 25
        rc = residual(c, w, compact=True)
        assert (rc.n, rc.k) == (25, 11)
        assert rc.weight_enumerator.as_dict() == want


def test_residual_trivial_cases(fx):
    r = residual(rep(4), 0b1111, compact=True)
    assert r.n == 0
    k = fx("kummer16")
    ones = next(w for w in k.codewords() if w.bit_count() == 16)
    assert residual(k, ones).effective_length == 0
    with pytest.raises(NotACodeword):
        residual(k, 1)


def test_residual_divisibility_property(fx, rng):
    # residuals of 8-divisible codes are 4-divisible
    c = fx("code64_13")
    for _ in range(200):
        sub = c
        for _ in range(rng.randint(1, 8)):
            sub = subcode_by_messages(sub, rng.randrange(1, 1 << sub.k))
        words = [w for w in sub.codewords() if w]
        w = rng.choice(words)
        r = residual(sub, w)
        if r.k:
            assert divisibility(r) % 4 == 0


def test_restriction_to_support(fx):
    k = fx("kummer16")
    assert restriction_to_support(rep(4), 0b1111) == rep(4)
    for w in k.codewords():
        if w.bit_count() == 8:
            s = restriction_to_support(k, w)
            assert s.n == 8
            assert all(x % 2 == 0 for x in s.nonzero_weights())
    c = fx("code64_13")
    w = next(w for w in c.codewords() if w.bit_count() == 24)
    s = restriction_to_support(c, w)
    assert s.n == 24 and all(x % 2 == 0 for x in s.nonzero_weights())
    with pytest.raises(NotACodeword):
        restriction_to_support(k, 1)


def test_point_multiset_examples(fx):
    ps = point_multiset(fx("code65_12"))
    assert set(ps.points.values()) == {1} and ps.cardinality == 65
    doubled = Code(["110", "001"])
    assert sorted(point_multiset(doubled).points.values()) == [1, 2]
    with pytest.raises(NotFullLength):
        point_multiset(Code(["110"]))


def test_56_9_point_shapes(fx):
    b = point_multiset(fx("code56_9b"))
    assert b.shape() == {1: 51, 5: 1}
    for fid in ("code56_9a", "code56_9b"):
        c = fx(fid)
        ps = point_multiset(c)
        assert ps.cardinality == 56
        # sum of (m choose 2) is the number of weight-2 dual words
        assert ps.a2_star == macwilliams_dual(c.weight_enumerator, c.k)[2]


def test_projection_of_56_9_gives_51_8(fx):
    ps = point_multiset(fx("code56_9b"))
    p = next(p for p, m in ps.points.items() if m == 5)
    q = project_through_point(ps, p)
    assert q.cardinality == 51 and q.dim == 8
    assert set(q.points.values()) == {1}
    assert are_equivalent(q.to_code(), fx("code51_8"))


def test_projection_small_cases():
    fano = PointMultiset({p: 1 for p in range(1, 8)}, 3)
    for p in range(1, 8):
        q = project_through_point(fano, p)
        assert q.dim == 2 and dict(q.points) == {1: 2, 2: 2, 3: 2}
    single = PointMultiset({5: 1}, 3)
    assert project_through_point(single, 5).cardinality == 0
    with pytest.raises(PointAbsent):
        project_through_point(fano.__class__({1: 1}, 3), 2)


def test_projection_bookkeeping(rng):
    for _ in range(100):
        dim = rng.randint(2, 6)
        pts = Counter(rng.randrange(1, 1 << dim) for _ in range(rng.randint(1, 30)))
        ps = PointMultiset(dict(pts), dim)
        p = rng.choice(sorted(pts))
        q = project_through_point(ps, p)
        assert q.cardinality == ps.cardinality - pts[p]
        assert q.dim == dim - 1


def test_puncture_and_shorten(fx):
    c = puncture(Code(BitMatrix.identity(3)), 0)
    assert (c.n, c.k) == (2, 2)
    assert shorten(rep(4), 2).k == 0 and shorten(rep(4), 2).n == 3
    q = fx("quintic31")
    for col in (0, 7, 30):
        p = puncture(q, col)
        assert (p.n, p.k) == (30, 5)
        assert p.nonzero_weights() == [15, 16]
    with pytest.raises(IndexError):
        puncture(q, 31)


def test_puncture_enumerator_brute_force(rng):
    for _ in range(40):
        n = rng.randint(3, 12)
        k = rng.randint(1, min(n, 6))
        c = random_code(rng, n, k, full=False)
        col = rng.randrange(n)
        words = {w & ~(1 << col) for w in c.codewords()}
        counts = Counter(w.bit_count() for w in words)
        p = puncture(c, col)
        assert p.weight_enumerator.as_dict() == dict(counts)
        s = shorten(c, col)
        kept = Counter(w.bit_count() for w in c.codewords() if not (w >> col) & 1)
        assert s.weight_enumerator.as_dict() == dict(kept)


def test_projective_iff_dual_distance(fx):
    for fid in fixtures.ids():
        c = fx(fid)
        dual = macwilliams_dual(c.weight_enumerator, c.k)
        assert c.projective == (dual[1] == 0 and dual[2] == 0)
        if c.n - c.k <= 16:
            d = dual_distance_by_enumeration(c)
            assert c.projective == (d is None or d >= 3)
            assert c.full_length == (d is None or d >= 2)


def test_projective_small_codes(rng):
    for _ in range(50):
        n = rng.randint(2, 10)
        c = random_code(rng, n, rng.randint(1, min(4, n)), full=False)
        d = dual_distance_by_enumeration(c)
        assert c.full_length == (d is None or d >= 2)
        assert c.projective == (d is None or d >= 3)


def test_four_divisible_fixtures_self_orthogonal(fx):
    for fid in fixtures.ids():
        c = fx(fid)
        if divisibility(c) % 4 == 0:
            rows = c.gen.rows
            assert all((a & b).bit_count() % 2 == 0 for a, b in itertools.combinations(rows, 2))
            assert c.k <= c.n // 2


def test_point_multiset_a2_star(fx, rng):
    for fid in ("code56_9a", "code56_9b", "cayley4", "code65_12"):
        c = fx(fid)
        ps = point_multiset(c)
        assert ps.a2_star == sum(comb(m, 2) for m in ps.points.values())


def test_subcode_by_messages(fx):
    c = fx("kummer16")
    for f in range(1, 32):
        s = subcode_by_messages(c, f)
        assert s.k == 4
        assert all(c.contains(w) for w in s.codewords())
