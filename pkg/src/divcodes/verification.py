"""Re-derivation of every published claim the package can check, as a stream of named checks.

Three tiers: ``fast`` (minutes), ``search`` (adds the extension and
lengthening searches) and ``long`` (adds the full residual classification).
"""

from __future__ import annotations

import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass

from . import fixtures
from .canonical import aut_group_order, are_equivalent, canonical_label
from .codes import Code, residual, subcode_by_messages
from .identities import (
    MomentSystem,
    a40_closed_form,
    a40_plus_a48_closed_form,
    macwilliams_dual,
    power_moments_check,
)
from .search import engine, oracle
from .search.spec import Mode, SearchSpec, WeightRule

TIERS = ("fast", "search", "long")

ENUMERATOR_IDS = ("kummer16", "quintic31", "code64_13", "code63_12", "code64_12",
                  "code65_12", "residual25_11", "septic96_10", "septic94_10")
AUT_ORDERS = {"code63_12": 362880, "code64_12": 5760, "code65_12": 15600,
              "cprime66_13": 15600, "residual25_11": 4608, "code64_13": 23224320}
CLOSED_FORM_A40 = {63: 378, 64: 506, 65: 650}
SMALL_IDS = ("code51_8", "code54_8", "code55_8a", "code55_8b", "code56_8a",
             "code56_8b", "code56_8c", "code56_9a", "code56_9b")
C_PRIME_COSET = {16: 26, 28: 650, 32: 1690, 36: 1300, 40: 300, 44: 130}
EXT_WEIGHTS_EMPTY = (24, 32, 40, 48, 56)
EXT_WEIGHTS_UNIQUE = (16, 28, 32, 36, 40, 44)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"check": self.name, "passed": bool(self.passed), "detail": self.detail,
                "seconds": round(self.seconds, 2)}


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as e:  # a crashing check is a failing check
        ok, detail = False, f"{type(e).__name__}: {e}"
    return Check(name, bool(ok), detail, time.perf_counter() - t0)


def _code(fid: str) -> Code:
    return fixtures.load(fid).code


# fast tier --------------------------------------------------------------------


def _fixture_checks() -> Iterator[Check]:
    for fid in fixtures.ids():
        def run(fid=fid):
            res = fixtures.check(fixtures.load(fid))
            bad = [n for n, ok, _ in res if not ok]
            return not bad, "failed: " + ",".join(bad) if bad else f"{len(res)} expectations"
        yield _timed(f"fixture:{fid}", run)


def _enumerator(fid: str) -> tuple[bool, str]:
    e = fixtures.load(fid)
    want = e.enumerator
    got = e.code.weight_enumerator
    return want is not None and got == want, got.polynomial()


def _aut(fid: str) -> tuple[bool, str]:
    a = aut_group_order(_code(fid))
    return a == AUT_ORDERS[fid], str(a)


def _moments(fid: str) -> tuple[bool, str]:
    res = power_moments_check(MomentSystem.from_code(_code(fid)))
    return all(r == 0 for r in res), str([str(r) for r in res])


def _closed_form(fid: str) -> tuple[bool, str]:
    # a2*, a3* come from the dual enumerator; the a56, a64 slack terms are zero
    c = _code(fid)
    ms = MomentSystem.from_code(c)
    v = a40_closed_form(c.n, ms.a_star_2, ms.a_star_3)
    return v == CLOSED_FORM_A40[c.n] == c.weight_enumerator[40], f"a40={v} a2*={ms.a_star_2} a3*={ms.a_star_3}"


def _negative_window() -> tuple[bool, str]:
    vals = {n: a40_plus_a48_closed_form(n) for n in range(54, 61)}
    return all(v < 0 for v in vals.values()), str({n: str(v) for n, v in vals.items()})


def _involution(fid: str) -> tuple[bool, str]:
    c = _code(fid)
    w = c.weight_enumerator
    d = macwilliams_dual(w, c.k)
    back = macwilliams_dual(d, c.n - c.k)
    return back == w, f"dual a1..a3={d[1]},{d[2]},{d[3]}"


def _dual_oracle(fid: str) -> tuple[bool, str]:
    c = _code(fid)
    brute = c.dual().weight_enumerator
    return brute == macwilliams_dual(c.weight_enumerator, c.k), f"n-k={c.n - c.k}"


def _length9() -> tuple[bool, str]:
    spec = SearchSpec(9, allowed_weights=WeightRule(divisor=4), exact_length=True)
    res = engine.classify(spec)
    rep = oracle.verify_completeness(res, spec)
    return len(res) == 0 and rep.agree, f"{len(res)} codes, oracle {rep.oracle_count}"


def _small_weights(fid: str) -> tuple[bool, str]:
    c = _code(fid)
    ok = {24, 32} | ({56} if c.k == 9 else set())
    ws = c.nonzero_weights()
    return set(ws) <= ok, f"[{c.n},{c.k}] weights {ws}"


def _residuals() -> tuple[bool, str]:
    c = _code("code65_12")
    key = canonical_label(_code("residual25_11")).key()
    words = [w for w in c.codewords() if w.bit_count() == 40]
    same = sum(canonical_label(residual(c, w, compact=True)).key() == key for w in words)
    return len(words) == 650 and same == 650, f"{same}/{len(words)} equivalent"


def _hyperplanes() -> tuple[bool, str]:
    cp = _code("cprime66_13")
    c65 = _code("code65_12")
    hits = []
    for f in range(1, 1 << cp.k):
        sub = subcode_by_messages(cp, f)
        if sub.nonzero_weights() != c65.nonzero_weights():
            continue
        sc = sub.compact()
        if are_equivalent(sc, c65):
            hits.append(sub)
    if not hits:
        return False, "no hyperplane equivalent to code65_12"
    sub = hits[0]
    coset: dict[int, int] = {}
    for w in cp.codewords():
        if not sub.contains(w):
            coset[w.bit_count()] = coset.get(w.bit_count(), 0) + 1
    return coset == C_PRIME_COSET, f"{len(hits)} matching hyperplanes, coset {dict(sorted(coset.items()))}"


def fast_checks() -> Iterator[Check]:
    yield from _fixture_checks()
    for fid in ENUMERATOR_IDS:
        yield _timed(f"enumerator:{fid}", lambda fid=fid: _enumerator(fid))
    for fid in AUT_ORDERS:
        yield _timed(f"aut_order:{fid}", lambda fid=fid: _aut(fid))
    for fid in ("code63_12", "code64_12", "code65_12"):
        yield _timed(f"projective:{fid}", lambda fid=fid: (_code(fid).projective, ""))
    for fid in fixtures.ids():
        yield _timed(f"moments:{fid}", lambda fid=fid: _moments(fid))
    for fid in ("code63_12", "code64_12", "code65_12"):
        yield _timed(f"closed_form_a40:{fid}", lambda fid=fid: _closed_form(fid))
    yield _timed("closed_form_negative:54-60", _negative_window)
    for fid in fixtures.ids():
        yield _timed(f"macwilliams_involution:{fid}", lambda fid=fid: _involution(fid))
        rec = fixtures.manifest()["fixtures"][fid]
        if rec["n"] - rec["k"] <= 16:
            yield _timed(f"dual_oracle:{fid}", lambda fid=fid: _dual_oracle(fid))
    yield _timed("nonexistence:length9", _length9)
    for fid in SMALL_IDS:
        yield _timed(f"weights:{fid}", lambda fid=fid: _small_weights(fid))
    yield _timed("residuals:code65_12", _residuals)
    yield _timed("hyperplane:cprime66_13", _hyperplanes)


# search tier ------------------------------------------------------------------


def extension_spec(seed: Code, weights, max_len: int = 66) -> SearchSpec:
    return SearchSpec(max_len, seed.k + 1, frozenset(weights), Mode.EXTEND_DIMENSION, (seed,),
                      new_coords_max=max_len - seed.n)


def lengthening_spec(seed: Code, w: int = 40, n: int = 65, k: int = 12) -> SearchSpec:
    rule = WeightRule(divisor=8, d_min=24)
    return SearchSpec(n, k, rule, Mode.EXTEND_LENGTH, (seed,), exact_length=True,
                      residual_weight=w)


def _no_extension(fid: str) -> tuple[bool, str]:
    res = engine.extend_dimension(extension_spec(_code(fid), EXT_WEIGHTS_EMPTY))
    return len(res) == 0, f"{len(res)} extensions"


def _unique_extension() -> tuple[bool, str]:
    res = engine.extend_dimension(extension_spec(_code("code65_12"), EXT_WEIGHTS_UNIQUE))
    ok = len(res) == 1 and are_equivalent(res.codes[0], _code("cprime66_13"))
    return ok, f"{len(res)} extensions"


def _lengthen() -> tuple[bool, str]:
    res = engine.lengthen_from_residual(lengthening_spec(_code("residual25_11")))
    ok = len(res) == 1 and are_equivalent(res.codes[0], _code("code65_12"))
    return ok, f"{len(res)} codes"


def search_checks() -> Iterator[Check]:
    for fid in ("code63_12", "code64_12", "code65_12"):
        yield _timed(f"no_extension:{fid}", lambda fid=fid: _no_extension(fid))
    yield _timed("unique_extension:code65_12", _unique_extension)
    yield _timed("lengthen:residual25_11", _lengthen)


# long tier --------------------------------------------------------------------

RESIDUAL_COUNTS = {23: 11, 24: 83, 25: 215}
TEN_CODES = {63: 1, 64: 8, 65: 1}


def residual_classes(jobs: int = 1, checkpoint=None) -> dict[int, list[Code]]:
    """4-divisible full-length [n, 11] codes for n = 23, 24, 25, up to equivalence."""
    spec = SearchSpec(25, 11, WeightRule(divisor=4))
    res = engine.classify(spec, jobs=jobs, checkpoint=checkpoint)
    out: dict[int, list[Code]] = {n: [] for n in RESIDUAL_COUNTS}
    for c in res.codes:
        if c.n in out:
            out[c.n].append(c)
    return out


def long_checks(jobs: int = 1, checkpoint=None) -> Iterator[Check]:
    found: dict[int, list[Code]] = {}

    def classes():
        found.update(residual_classes(jobs, checkpoint))
        counts = {n: len(v) for n, v in found.items()}
        return counts == RESIDUAL_COUNTS, str(counts)

    yield _timed("classify:4div_[23..25,11]", classes)

    def ten():
        if not found:
            return False, "residual classification unavailable"
        seeds = tuple(c for n in sorted(found) for c in found[n])
        spec = SearchSpec(65, 12, WeightRule(divisor=8, d_min=24), Mode.EXTEND_LENGTH, seeds,
                          residual_weight=40)
        res = engine.lengthen_from_residual(spec)
        counts = {n: sum(c.n == n for c in res.codes) for n in TEN_CODES}
        heavy = [c.n for c in res.codes if set(c.nonzero_weights()) & {48, 56}]
        return counts == TEN_CODES and not heavy, f"{counts}, with 48/56: {heavy}"

    yield _timed("lengthen:ten_codes", ten)


def run(tier: str = "fast", jobs: int = 1, checkpoint=None) -> Iterator[Check]:
    if tier not in TIERS:
        raise ValueError(f"unknown tier {tier!r}")
    yield from fast_checks()
    if tier in ("search", "long"):
        yield from search_checks()
    if tier == "long":
        yield from long_checks(jobs, checkpoint)
