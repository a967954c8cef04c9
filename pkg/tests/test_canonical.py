import itertools
from collections import Counter
from math import factorial, prod

import numpy as np
import pytest

from divcodes import fixtures
from divcodes.canonical import are_equivalent, aut_group_order, automorphism_generators, canonical_label
from divcodes.codes import Code
from divcodes.errors import NotFullLength
from divcodes.gf2 import BitMatrix

from conftest import random_code


def shuffled(c: Code, r) -> Code:
    perm = list(range(c.n))
    r.shuffle(perm)
    return c.permute(perm)


def test_label_invariance_fixtures(fx, rng):
    for fid in fixtures.ids():
        c = fx(fid)
        lab = canonical_label(c)
        for _ in range(100):
            assert canonical_label(shuffled(c, rng)).canonical_gen == lab.canonical_gen


def test_certificate_reproduces_form(fx, rng):
    for fid in fixtures.ids():
        c = shuffled(fx(fid), rng)
        lab = canonical_label(c)
        assert c.permute(lab.certificate).gen == lab.canonical_gen


def test_label_deterministic(fx):
    a = canonical_label(fx("code64_12"))
    b = canonical_label(Code(fx("code64_12").gen))
    assert a == b and a.key() == b.key() and a.to_text() == b.to_text()


def test_paper_aut_orders(fx):
    assert aut_group_order(fx("code65_12")) == 15600
    assert aut_group_order(fx("code63_12")) == 362880
    assert aut_group_order(fx("code64_12")) == 5760
    assert aut_group_order(fx("code64_13")) == 23224320
    assert aut_group_order(fx("residual25_11")) == 4608
    assert aut_group_order(fx("cprime66_13")) == 15600


def test_small_aut_orders(fx):
    assert aut_group_order(Code(BitMatrix((0b1111,), 4))) == 24
    gl5 = prod(2 ** 5 - 2 ** i for i in range(5))
    assert gl5 == 9999360
    assert aut_group_order(fx("quintic31")) == gl5


def test_generators_are_automorphisms(fx):
    for fid in ("kummer16", "code65_12", "residual25_11", "code56_9b"):
        c = fx(fid)
        words = set(c.codewords())
        for g in automorphism_generators(c):
            assert set(c.permute(g).codewords()) == words


def _brute_aut(c: Code) -> int:
    words = set(c.codewords())
    return sum(set(c.permute(p).codewords()) == words for p in itertools.permutations(range(c.n)))


def _aut_via_gl(c: Code) -> int:
    # a permutation automorphism induces a linear map of message space permuting
    # the column multiset; each such map lifts in prod(m!) ways
    k = c.k
    cols = Counter(c.column_vectors)
    vecs = range(1 << k)
    count = 0
    for images in itertools.product(vecs, repeat=k):
        if len({0, *images}) != k + 1:
            continue
        def apply(v):
            out = 0
            for i in range(k):
                if (v >> i) & 1:
                    out ^= images[i]
            return out
        if len({apply(v) for v in vecs}) != 1 << k:
            continue
        if all(cols.get(apply(p), 0) == m for p, m in cols.items()):
            count += 1
    return count * prod(factorial(m) for m in cols.values())


def test_aut_order_brute_force_small(rng):
    for _ in range(25):
        n = rng.randint(1, 7)
        c = random_code(rng, n, rng.randint(1, min(n, 3)))
        assert aut_group_order(c) == _brute_aut(c)


def test_aut_order_linear_count(rng):
    for _ in range(40):
        n = rng.randint(2, 12)
        c = random_code(rng, n, rng.randint(1, min(n, 4)))
        assert aut_group_order(c) == _aut_via_gl(c)


def test_equivalence_examples(fx, rng):
    c = fx("code64_12")
    assert are_equivalent(c, c.permute(list(range(c.n))[::-1]))
    assert not are_equivalent(fx("code63_12"), fx("code64_12"))
    assert not are_equivalent(fx("code55_8a"), fx("code55_8b"))
    with pytest.raises(NotFullLength):
        are_equivalent(Code(["110"]), Code(["110"]))
    with pytest.raises(NotFullLength):
        canonical_label(Code(["110"]))


def test_equivalence_needs_same_enumerator(rng):
    codes = [random_code(rng, 8, 3) for _ in range(40)]
    for a, b in itertools.combinations(codes, 2):
        if are_equivalent(a, b):
            assert a.weight_enumerator == b.weight_enumerator
            assert sorted(Counter(a.column_vectors).values()) == sorted(Counter(b.column_vectors).values())


def test_labels_separate_random_codes(rng):
    # equal labels exactly when a permutation maps one code onto the other
    for _ in range(30):
        n = rng.randint(2, 6)
        k = rng.randint(1, min(n, 3))
        a, b = random_code(rng, n, k), random_code(rng, n, k)
        same = any(set(a.permute(p).codewords()) == set(b.codewords())
                   for p in itertools.permutations(range(n)))
        assert are_equivalent(a, b) == same
        assert (canonical_label(a).key() == canonical_label(b).key()) == same
