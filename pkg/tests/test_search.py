import itertools
from collections import Counter
import json

import numpy as np
import pytest

from divcodes.canonical import canonical_label
from divcodes.codes import Code
from divcodes.errors import BudgetExceeded, CheckpointMismatch, NotFullLength, SpecInfeasible
from divcodes.gf2 import BitMatrix
from divcodes.search import (
    Mode,
    SearchSpec,
    WeightRule,
    classify,
    extend_dimension,
    lengthen_from_residual,
    verify_completeness,
)
from divcodes.search.lengthen import ResidualLengthener
from divcodes.search.lift import CosetLifter

from conftest import random_code


def rep(n):
    return Code(BitMatrix(((1 << n) - 1,), n))


def assert_sound(res, spec):
    allowed = spec.allowed()
    labels = [canonical_label(c).key() for c in res.codes]
    assert len(set(labels)) == len(labels)
    assert labels == res.labels
    for c in res.codes:
        fresh = Code(c.gen.to_strings())
        assert fresh.full_length
        assert spec.length_ok(fresh.n)
        if spec.mode is Mode.CLASSIFY:
            assert set(fresh.nonzero_weights()) <= allowed


# coset lifting ----------------------------------------------------------------


def test_lift_matches_brute_force(rng):
    trials = 0
    while trials < 150:
        n = rng.randint(1, 9)
        d = random_code(rng, n, rng.randint(1, min(n, 4)))
        allowed = set(rng.sample(range(1, n + 4), rng.randint(1, n + 2)))
        t = rng.randint(0, 2)
        lf = CosetLifter(d)
        counts, _ = lf.solve(allowed, t)
        words = d.codewords()
        brute = [u for u in range(1 << n)
                 if not any((u >> p) & 1 for p in d.pivots)
                 and all(((u ^ c).bit_count() + t) in allowed for c in words)]
        bits = np.array([[(u >> j) & 1 for j in range(n)] for u in brute], dtype=np.uint8).reshape(len(brute), n)
        want = {r.tobytes() for r in lf.counts_of(bits)}
        assert {r.tobytes() for r in counts} == want
        assert len(counts) == len(want)
        trials += 1


# residual lengthening -----------------------------------------------------------


def _translation_class(mult, k):
    m = 1 << k
    return frozenset(tuple(mult[y ^ tau] for y in range(m)) for tau in range(m))


def _standard(row, dirs, k):
    # rewrite multiplicities from the solver's direction coordinates to message coordinates
    m = 1 << k
    out = [0] * m
    for q in range(m):
        if row[q]:
            hit = [x for x in range(m)
                   if all((bin(dirs[i] & x).count("1") & 1) == ((q >> i) & 1) for i in range(k))]
            assert len(hit) == 1
            out[hit[0]] += row[q]
    return out


def test_lengthening_matches_brute_force(rng):
    done = 0
    while done < 120:
        n = rng.randint(2, 7)
        k = rng.randint(1, min(n, 3))
        r = random_code(rng, n, k)
        if r.k != k:
            continue
        w = rng.randint(1, 5)
        allowed = set(rng.sample(range(1, n + w + 1), rng.randint(1, n + w))) | {w}
        eng = ResidualLengthener(r, w)
        out, dirs = eng.solve(allowed, symmetries=False)
        m = 1 << k
        words = r.codewords()
        brute = set()
        for combo in itertools.combinations_with_replacement(range(m), w):
            mult = [0] * m
            for p in combo:
                mult[p] += 1
            good = True
            for h in range(1, m):
                v = words[h].bit_count()
                odd = sum(mult[p] for p in range(m) if bin(p & h).count("1") & 1)
                if (v + odd) not in allowed or (v + w - odd) not in allowed:
                    good = False
                    break
            if good:
                brute.add(_translation_class(mult, k))
        got = [_translation_class(_standard(list(row), d, k), k) for row, d in zip(out, dirs)]
        assert len(got) == len(set(got))
        assert set(got) == brute
        for row, d in zip(out, dirs):
            c = Code(eng.build(row, d))
            assert c.k == k + 1 and set(c.nonzero_weights()) <= allowed
        # pruning by Aut(r) keeps one code per equivalence class
        unit = [1 << i for i in range(k)]
        every = {canonical_label(Code(eng.build(np.array(_standard(list(row), d, k)), unit))).key()
                 for row, d in zip(out, dirs)}
        for fmax in (0, 3, 4000):
            out, dirs = eng.solve(allowed, frontier_max=fmax)
            assert len(out) <= len(got)
            assert {canonical_label(Code(eng.build(row, d))).key() for row, d in zip(out, dirs)} == every
        out, dirs = eng.solve(allowed, symmetries=False, frontier_max=0)
        assert Counter(_translation_class(_standard(list(row), d, k), k) for row, d in zip(out, dirs)) \
            == Counter(got)
        done += 1


def _keys(eng, out, dirs):
    return {canonical_label(Code(eng.build(row, d))).key() for row, d in zip(out, dirs)}


HAMMING8 = Code(BitMatrix.from_strings(["11110000", "00111100", "00001111", "01010101"]))


@pytest.mark.parametrize("w,allowed", [(8, {4, 8, 12, 16}), (12, {8, 12, 16}), (4, {4, 8, 12})])
def test_lengthening_symmetric_residual(w, allowed):
    # Aut has order 1344, so the span-moving reduction is exercised
    eng = ResidualLengthener(HAMMING8, w)
    plain = _keys(eng, *eng.solve(allowed, symmetries=False, frontier_max=0))
    assert plain
    for fmax in (0, 2, 30, 4000):
        assert _keys(eng, *eng.solve(allowed, frontier_max=fmax)) == plain
    spec = SearchSpec(8 + w, 5, frozenset(allowed), Mode.EXTEND_LENGTH, (HAMMING8,), exact_length=True,
                      residual_weight=w)
    res = lengthen_from_residual(spec)
    assert {canonical_label(c).key() for c in res.codes} == plain


def test_lengthen_degenerate_empty_residual():
    # a zero-length residual: every code is generated by the all-ones word
    seed = Code(BitMatrix.empty(0))
    spec = SearchSpec(4, 1, {4}, Mode.EXTEND_LENGTH, (seed,), residual_weight=4)
    res = lengthen_from_residual(spec)
    assert len(res) == 1 and res.codes[0] == rep(4)


def test_lengthen_oracle(rng):
    for _ in range(8):
        n = rng.randint(2, 5)
        seed = random_code(rng, n, rng.randint(1, 2))
        w = rng.randint(1, 4)
        rule = WeightRule(divisor=rng.choice([1, 2]))
        spec = SearchSpec(n + w, seed.k + 1, rule, Mode.EXTEND_LENGTH, (seed,), residual_weight=w)
        res = lengthen_from_residual(spec)
        rep_ = verify_completeness(res, spec)
        assert rep_.agree, rep_.as_dict()


# extension ----------------------------------------------------------------------


def test_extend_repetition_example():
    spec = SearchSpec(4, 2, {2}, Mode.EXTEND_DIMENSION, (rep(4),), new_coords_max=0)
    res = extend_dimension(spec)
    assert len(res) == 1
    c = res.codes[0]
    assert c.weight_enumerator.as_dict() == {0: 1, 2: 2, 4: 1}
    assert verify_completeness(res, spec).agree


def test_extension_oracle(rng):
    checked = 0
    while checked < 30:
        n = rng.randint(1, 8)
        seed = random_code(rng, n, rng.randint(1, min(n, 3)))
        extra = rng.randint(0, 2)
        allowed = set(rng.sample(range(1, n + extra + 1), rng.randint(1, n + extra)))
        spec = SearchSpec(n + extra, seed.k + 1, allowed, Mode.EXTEND_DIMENSION, (seed,),
                          new_coords_max=extra)
        res = extend_dimension(spec)
        rep_ = verify_completeness(res, spec)
        assert rep_.agree, (seed.gen, allowed, extra, rep_.as_dict())
        checked += 1


def test_extension_rejects_bad_specs():
    with pytest.raises(SpecInfeasible):
        extend_dimension(SearchSpec(4, 3, {2}, Mode.EXTEND_DIMENSION, (rep(4),)))
    with pytest.raises(SpecInfeasible):
        extend_dimension(SearchSpec(4, 2, {2}, Mode.CLASSIFY, (rep(4),)))
    with pytest.raises(NotFullLength):
        SearchSpec(4, 2, {2}, Mode.EXTEND_DIMENSION, (Code(["0110"]),))


# classification -------------------------------------------------------------------

ORACLE_SPECS = [
    dict(target_n=8, allowed_weights=WeightRule(divisor=4), exact_length=True),
    dict(target_n=9, allowed_weights=WeightRule(divisor=4), exact_length=True),
    dict(target_n=8, target_k=2, allowed_weights=WeightRule(divisor=4), exact_length=True),
    dict(target_n=8, target_k=3, allowed_weights=WeightRule(divisor=4)),
    dict(target_n=10, target_k=3, allowed_weights=WeightRule(divisor=4), exact_length=True),
    dict(target_n=7, target_k=3, allowed_weights=WeightRule(divisor=2)),
    dict(target_n=9, target_k=3, allowed_weights=WeightRule(divisor=2, d_min=4)),
    dict(target_n=6, target_k=4, allowed_weights=WeightRule()),
    dict(target_n=10, target_k=2, allowed_weights=frozenset({3, 6})),
    dict(target_n=7, target_k=4, allowed_weights=frozenset({3, 4, 7})),
]


@pytest.mark.parametrize("kw", ORACLE_SPECS, ids=lambda kw: f"n{kw['target_n']}k{kw.get('target_k')}")
def test_classify_matches_oracle(kw):
    spec = SearchSpec(**kw)
    res = classify(spec)
    assert_sound(res, spec)
    rep_ = verify_completeness(res, spec)
    assert rep_.agree, rep_.as_dict()


def test_length9_is_empty():
    spec = SearchSpec(9, allowed_weights=WeightRule(divisor=4), exact_length=True)
    assert len(classify(spec)) == 0


def test_classify_infeasible():
    with pytest.raises(SpecInfeasible):
        classify(SearchSpec(3, allowed_weights=WeightRule(divisor=4)))
    with pytest.raises(SpecInfeasible):
        classify(SearchSpec(5, allowed_weights={7, 9}))


def test_oracle_budget():
    spec = SearchSpec(30, 5, WeightRule(divisor=2))
    with pytest.raises(BudgetExceeded):
        verify_completeness(classify(SearchSpec(4, 1, WeightRule(divisor=2))), spec, oracle_budget=1000)


def test_jobs_do_not_change_result():
    spec = SearchSpec(10, 4, WeightRule(divisor=2, d_min=4))
    a = classify(spec)
    b = classify(spec, jobs=2)
    assert a.labels == b.labels


def test_checkpoint_resume(tmp_path):
    spec = SearchSpec(9, 3, WeightRule(divisor=2, d_min=4))
    path = tmp_path / "ck.jsonl"
    first = classify(spec, checkpoint=path)
    lines = path.read_text().splitlines()
    assert json.loads(lines[0])["spec"] == spec.digest()
    # resume from a file cut in the middle of a record
    path.write_text("\n".join(lines[:3]) + "\n" + lines[3][:10])
    second = classify(spec, checkpoint=path)
    assert second.labels == first.labels
    third = classify(spec, checkpoint=path)
    assert third.labels == first.labels


def test_checkpoint_mismatch(tmp_path):
    path = tmp_path / "ck.jsonl"
    classify(SearchSpec(6, 2, WeightRule(divisor=2)), checkpoint=path)
    with pytest.raises(CheckpointMismatch):
        classify(SearchSpec(7, 2, WeightRule(divisor=2)), checkpoint=path)


def test_spec_digest_stable():
    a = SearchSpec(9, 3, WeightRule(divisor=2))
    b = SearchSpec(9, 3, WeightRule(divisor=2))
    assert a.digest() == b.digest()
    assert a.digest() != SearchSpec(9, 4, WeightRule(divisor=2)).digest()
