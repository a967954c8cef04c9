"""Exhaustive generation of codes: one-step extensions, residual lengthening, classification."""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from ..canonical import CanonicalLabel, canonical_label
from ..codes import Code
from ..errors import CheckpointMismatch, SpecInfeasible
from ..gf2 import BitMatrix
from .lengthen import ResidualLengthener
from .lift import CosetLifter
from .spec import Mode, SearchResult, SearchSpec, SearchStats

log = logging.getLogger(__name__)


def code_from_key(key: str) -> Code:
    n, _, rows = key.partition(":")
    return Code(BitMatrix(tuple(int(r, 16) for r in rows.split(",")) if rows else (), int(n)))


def _sorted_result(found: dict[str, Code], stats: SearchStats) -> SearchResult:
    keys = sorted(found, key=lambda s: (found[s].n, found[s].k, s))
    return SearchResult([found[s] for s in keys], stats, keys)


def _coset_weights(gen: BitMatrix, sub_rows: int) -> list[int]:
    # generator rows [0, sub_rows) span the old code, the remaining row is the new one
    base = [0]
    for r in gen.rows[:sub_rows]:
        base += [b ^ r for b in base]
    new = gen.rows[sub_rows]
    return [(b ^ new).bit_count() for b in base]


# one-dimensional extensions ---------------------------------------------------


def extension_lengths(spec: SearchSpec, seed: Code) -> range:
    top = spec.target_n - seed.n
    if spec.new_coords_max is not None:
        top = min(top, spec.new_coords_max)
    if top < 0:
        return range(0)
    if spec.exact_length:
        return range(top, top + 1)
    return range(0, top + 1)


def extend_dimension(spec: SearchSpec) -> SearchResult:
    """All codes ``<D, u + 1^t>`` (up to equivalence) whose new words have allowed weights."""
    if spec.mode is not Mode.EXTEND_DIMENSION:
        raise SpecInfeasible("extend_dimension needs mode EXTEND_DIMENSION")
    if len(spec.seeds) != 1:
        raise SpecInfeasible("extend_dimension takes exactly one seed")
    seed = spec.seeds[0]
    if spec.target_k is not None and spec.target_k != seed.k + 1:
        raise SpecInfeasible(f"extending a {seed.k}-dimensional seed cannot reach k={spec.target_k}")
    allowed = spec.allowed()
    stats = SearchStats()
    t0 = time.perf_counter()
    lifter = CosetLifter(seed)
    gens = None
    found: dict[str, Code] = {}
    for t in extension_lengths(spec, seed):
        counts, nodes = lifter.solve(allowed, t)
        stats.nodes += nodes
        stats.per_level[t] = len(counts)
        stats.candidates += len(counts)
        if not len(counts):
            continue
        if gens is None:
            gens = canonical_label(seed).generators if seed.n else ()
        reps = lifter.orbit_representatives(counts, [list(g) for g in gens])
        stats.isomorph_rejections += len(counts) - len(reps)
        u = lifter.decode(counts[reps])
        for row in u:
            g = lifter.build(row, t)
            if not all(w in allowed for w in _coset_weights(g, seed.k)):
                raise AssertionError("lift produced a coset with a forbidden weight")
            c = Code(g)
            key = canonical_label(c).key()
            if key in found:
                stats.isomorph_rejections += 1
            else:
                found[key] = c
    stats.wall_time = time.perf_counter() - t0
    return _sorted_result(found, stats)


# lengthening a residual -------------------------------------------------------


def lengthen_from_residual(spec: SearchSpec, count_cap: int = 4) -> SearchResult:
    """Codes with a weight-``w`` word whose residual is one of the seeds."""
    if spec.mode is not Mode.EXTEND_LENGTH:
        raise SpecInfeasible("lengthen_from_residual needs mode EXTEND_LENGTH")
    w = spec.residual_weight
    if w is None or w <= 0:
        raise SpecInfeasible("lengthening needs the residual weight w")
    allowed = spec.allowed()
    stats = SearchStats()
    t0 = time.perf_counter()
    found: dict[str, Code] = {}
    for seed in spec.seeds:
        n = seed.n + w
        if not spec.length_ok(n):
            continue
        if spec.target_k is not None and spec.target_k != seed.k + 1:
            continue
        eng = ResidualLengthener(seed, w)
        mult, dirs = eng.solve(allowed, spec.max_multiplicity, count_cap=count_cap)
        st = eng.last_stats
        stats.nodes += int(st[0])
        stats.candidates += len(mult)
        for lvl in range(seed.k + 1):
            stats.per_level[lvl] = stats.per_level.get(lvl, 0) + int(st[2 + lvl])
        for q, d in zip(mult, dirs):
            c = Code(eng.build(q, d))
            if c.k != seed.k + 1 or not set(c.nonzero_weights()) <= allowed:
                raise AssertionError("lengthening produced an inadmissible code")
            key = canonical_label(c).key()
            if key in found:
                stats.isomorph_rejections += 1
            else:
                found[key] = c
    stats.wall_time = time.perf_counter() - t0
    return _sorted_result(found, stats)


# classification by canonical augmentation --------------------------------------


def _apply(images: list[int], p: int) -> int:
    out = 0
    i = 0
    while p:
        if p & 1:
            out ^= images[i]
        p >>= 1
        i += 1
    return out


def canonical_point(code: Code, label: CanonicalLabel) -> int:
    """The hyperplane a code is grown from, as a point in its own message coordinates.

    Among the points of least multiplicity (absent points count as
    multiplicity zero) take the smallest one in canonical coordinates.
    """
    can = label.canonical_gen
    k = can.nrows
    mult = np.bincount(np.asarray(can.columns(), dtype=np.int64), minlength=1 << k)
    best = int(np.argmin(mult[1:])) + 1
    # canonical coordinates: e_i is the column at the i-th pivot
    piv = [(r & -r).bit_length() - 1 for r in can.rows]
    v = code.column_vectors
    lam = label.certificate
    return _apply([v[lam[j]] for j in piv], best)


def construction_point(code: Code, sub_rows: list[int]) -> int:
    """Point ``a`` with ``a . m = 0`` exactly for messages of the given subcode rows."""
    k = code.k
    piv = code.pivots
    msgs = [sum(((r >> p) & 1) << i for i, p in enumerate(piv)) for r in sub_rows]
    cand = np.arange(1, 1 << k, dtype=np.int64)
    good = np.ones(len(cand), dtype=bool)
    for m in msgs:
        good &= (np.bitwise_count(cand & m) & 1) == 0
    hits = cand[good]
    if len(hits) != 1:
        raise AssertionError("subcode is not a hyperplane")
    return int(hits[0])


def point_orbit(code: Code, gens, p: int) -> set[int]:
    v = code.column_vectors
    piv = code.pivots
    maps = [[v[g[q]] for q in piv] for g in gens]
    orbit = {p}
    todo = [p]
    while todo:
        x = todo.pop()
        for im in maps:
            y = _apply(im, x)
            if y not in orbit:
                orbit.add(y)
                todo.append(y)
    return orbit


def is_canonical_child(child: Code, parent_rows: list[int], label: CanonicalLabel) -> bool:
    a = construction_point(child, parent_rows)
    p = canonical_point(child, label)
    if a == p:
        return True
    if not label.generators:
        return False
    return a in point_orbit(child, label.generators, p)


def _max_new_coords(parent: Code, spec: SearchSpec) -> int:
    top = spec.target_n - parent.n
    j = parent.k
    # an accepted child has all 2^(j+1) - 1 points with multiplicity >= t
    denom = (1 << (j + 1)) - 2
    if denom > 0:
        top = min(top, parent.n // denom)
    return top


def children(parent: Code, spec: SearchSpec) -> tuple[list[Code], dict]:
    """Canonical children of ``parent`` (one per isomorphism class)."""
    allowed = spec.allowed()
    lifter = CosetLifter(parent)
    info = {"nodes": 0, "candidates": 0, "rejected": 0}
    gens = None
    seen: dict[str, Code] = {}
    for t in range(0, _max_new_coords(parent, spec) + 1):
        counts, nodes = lifter.solve(allowed, t)
        info["nodes"] += nodes
        if not len(counts):
            continue
        if gens is None:
            gens = [list(g) for g in canonical_label(parent).generators] if parent.n else []
        reps = lifter.orbit_representatives(counts, gens)
        info["candidates"] += len(reps)
        for row in lifter.decode(counts[reps]):
            g = lifter.build(row, t)
            c = Code(g)
            lab = canonical_label(c)
            key = lab.key()
            if key in seen or not is_canonical_child(c, list(g.rows[:parent.k]), lab):
                info["rejected"] += 1
                continue
            seen[key] = c
    return [seen[k] for k in sorted(seen)], info


def _children_job(args):
    key, spec = args
    kids, info = children(code_from_key(key), spec)
    return key, [canonical_label(c).key() for c in kids], info


class Checkpoint:
    """Append-only JSON-lines record of finished parents."""

    def __init__(self, path: Path | str, digest: str):
        self.path = Path(path)
        self.digest = digest
        self.done: dict[tuple[int, str], list[str]] = {}
        if self.path.exists() and self.path.stat().st_size:
            lines = self.path.read_text().splitlines()
            head = json.loads(lines[0])
            if head.get("spec") != digest:
                raise CheckpointMismatch(f"checkpoint {self.path} belongs to spec {head.get('spec')}")
            for ln in lines[1:]:
                if not ln.strip():
                    continue
                try:
                    rec = json.loads(ln)
                except json.JSONDecodeError:
                    break  # torn final line from an interrupted run
                self.done[(rec["k"], rec["parent"])] = rec["children"]
        else:
            self.path.write_text(json.dumps({"spec": digest, "format": 1}) + "\n")

    def record(self, k: int, parent: str, kids: list[str]):
        self.done[(k, parent)] = kids
        with self.path.open("a") as f:
            f.write(json.dumps({"k": k, "parent": parent, "children": kids}) + "\n")


def classify(spec: SearchSpec, jobs: int = 1, checkpoint: Path | str | None = None,
             progress=None) -> SearchResult:
    """All full-length codes (up to equivalence) with the spec's length, dimension and weights.

    Codes are grown one dimension at a time from the zero code; each class is
    produced once by accepting a child only if its construction hyperplane is
    equivalent to its canonical one.
    """
    if spec.mode is not Mode.CLASSIFY:
        raise SpecInfeasible("classify needs mode CLASSIFY")
    spec.allowed()
    stats = SearchStats()
    t0 = time.perf_counter()
    ck = Checkpoint(checkpoint, spec.digest()) if checkpoint else None
    kmax = spec.target_k if spec.target_k is not None else spec.target_n
    level_keys = ["0:"]
    found: dict[str, Code] = {}
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        for k in range(0, kmax):
            todo = [key for key in level_keys if not (ck and (k, key) in ck.done)]
            results: dict[str, list[str]] = {}
            if ck:
                for key in level_keys:
                    if (k, key) in ck.done:
                        results[key] = ck.done[(k, key)]
            args = [(key, spec) for key in todo]
            it = pool.map(_children_job, args, chunksize=1) if pool else map(_children_job, args)
            for key, kids, info in it:
                results[key] = kids
                stats.nodes += info["nodes"]
                stats.candidates += info["candidates"]
                stats.isomorph_rejections += info["rejected"]
                if ck:
                    ck.record(k, key, kids)
            nxt = sorted({c for key in level_keys for c in results[key]})
            total = sum(len(results[key]) for key in level_keys)
            if total != len(nxt):
                raise AssertionError("canonical augmentation produced a duplicate class")
            stats.per_level[k + 1] = len(nxt)
            if progress:
                progress(k + 1, len(nxt))
            level_keys = nxt
            for key in nxt:
                c = code_from_key(key)
                if spec.length_ok(c.n) and (spec.target_k is None or c.k == spec.target_k):
                    found[key] = c
            if not nxt:
                break
    finally:
        if pool:
            pool.shutdown()
    stats.wall_time = time.perf_counter() - t0
    return _sorted_result(found, stats)


def run(spec: SearchSpec, **kw) -> SearchResult:
    if spec.mode is Mode.CLASSIFY:
        return classify(spec, **kw)
    if spec.mode is Mode.EXTEND_DIMENSION:
        return extend_dimension(spec)
    return lengthen_from_residual(spec, **kw)
