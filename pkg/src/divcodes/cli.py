"""Command-line front end.

Codes are given as matrix files (rows of 0/1, '#' comments) or as fixture ids.
Exit status: 0 ok, 1 a check failed (or codes are not equivalent), 2 bad usage
or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import fixtures, gf2
from .canonical import are_equivalent, canonical_label
from .codes import Code, divisibility, minimum_distance, residual
from .errors import CodeError, ParseError
from .identities import MomentSystem, a40_closed_form, a40_plus_a48_closed_form, power_moments_check
from .search import engine
from .search.spec import Mode, SearchResult, SearchSpec, WeightRule

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def load_code(ref: str) -> Code:
    """A matrix file, or a fixture id (optionally written ``fixture:<id>``)."""
    if ref.startswith("fixture:"):
        return fixtures.load(ref.split(":", 1)[1]).code
    p = Path(ref)
    if p.exists():
        try:
            text = p.read_text()
        except (OSError, UnicodeDecodeError) as e:
            raise ParseError(f"{ref}: {e}") from e
        return Code(gf2.parse_matrix(text))
    try:
        return fixtures.load(ref).code
    except KeyError:
        raise UsageError(f"{ref}: no such file or fixture") from None


def int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def _emit(args, record: dict, text: str):
    if args.format == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


# analysis commands ------------------------------------------------------------


def cmd_analyze(args) -> int:
    c = load_code(args.code)
    d = minimum_distance(c) if c.k else None
    div = divisibility(c) if c.k else None
    res = power_moments_check(MomentSystem.from_code(c))
    enum = c.weight_enumerator.as_dict()
    rec = {"n": c.n, "k": c.k, "d": d, "div": div, "projective": c.projective,
           "full_length": c.full_length, "effective_length": c.effective_length,
           "enumerator": {str(w): a for w, a in enum.items()},
           "moment_residuals": [str(r) for r in res]}
    lines = [f"n={c.n} k={c.k} d={d} div={div} projective={str(c.projective).lower()}",
             "enumerator: " + " ".join(f"{w}:{a}" for w, a in enum.items()),
             "moment residuals: " + " ".join(str(r) for r in res)]
    _emit(args, rec, "\n".join(lines))
    return EXIT_OK


def cmd_dual(args) -> int:
    c = load_code(args.code).dual()
    if args.format == "json":
        print(json.dumps({"n": c.n, "k": c.k, "rows": c.gen.to_strings()}))
    else:
        sys.stdout.write(gf2.format_matrix(c.gen, [f"dual, n={c.n} k={c.k}"]))
    return EXIT_OK


def _pick_word(c: Code, args) -> int:
    if args.word is not None:
        s = args.word.strip()
        if len(s) != c.n or set(s) - {"0", "1"}:
            raise UsageError(f"--word needs {c.n} characters of 0/1")
        return sum(1 << j for j, ch in enumerate(s) if ch == "1")
    words = c.codewords()
    if args.index is not None:
        if not 0 <= args.index < len(words):
            raise UsageError(f"--index must be below {len(words)}")
        return words[args.index]
    for w in words:
        if w.bit_count() == args.weight:
            return w
    raise UsageError(f"no codeword of weight {args.weight}")


def cmd_residual(args) -> int:
    c = load_code(args.code)
    r = residual(c, _pick_word(c, args), compact=True)
    if args.format == "json":
        print(json.dumps({"n": r.n, "k": r.k, "rows": r.gen.to_strings()}))
    else:
        sys.stdout.write(gf2.format_matrix(r.gen, [f"residual, n={r.n} k={r.k}"]))
    return EXIT_OK


def cmd_canonical(args) -> int:
    lab = canonical_label(load_code(args.code))
    if args.format == "json":
        print(json.dumps({"key": lab.key(), "aut_order": lab.aut_order,
                          "rows": lab.canonical_gen.to_strings()}))
    else:
        sys.stdout.write(lab.to_text())
    return EXIT_OK


def cmd_equivalent(args) -> int:
    eq = are_equivalent(load_code(args.a), load_code(args.b))
    _emit(args, {"equivalent": eq}, "equivalent" if eq else "not equivalent")
    return EXIT_OK if eq else EXIT_FAIL


def cmd_moments(args) -> int:
    if args.code is None and args.closed_form is None:
        raise UsageError("give a code or --closed-form N")
    if args.closed_form is not None:
        n = args.closed_form
        a40 = a40_closed_form(n, args.a2, args.a3, args.a56, args.a64)
        s = a40_plus_a48_closed_form(n, args.a2, args.a3, args.a56, args.a64)
        _emit(args, {"n": n, "a40": str(a40), "a40_plus_a48": str(s)},
              f"n={n} a40={a40} a40+a48={s}")
        return EXIT_OK
    c = load_code(args.code)
    ms = MomentSystem.from_code(c)
    res = power_moments_check(ms)
    ok = all(r == 0 for r in res)
    _emit(args, {"a1_star": ms.a_star_1, "a2_star": ms.a_star_2, "a3_star": ms.a_star_3,
                 "residuals": [str(r) for r in res], "consistent": ok},
          f"a1*={ms.a_star_1} a2*={ms.a_star_2} a3*={ms.a_star_3}\n"
          f"residuals: {' '.join(str(r) for r in res)}")
    return EXIT_OK if ok else EXIT_FAIL


# search commands --------------------------------------------------------------


def _rule(args) -> WeightRule:
    explicit = frozenset(args.weights) if args.weights else None
    return WeightRule(divisor=args.divisible, d_min=args.min_distance, explicit=explicit)


def _write_results(res: SearchResult, out: Path | None, args) -> None:
    stats = res.stats.as_dict()
    stats.pop("wall_time")
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        for i, (c, key) in enumerate(zip(res.codes, res.labels)):
            text = gf2.format_matrix(c.gen, [f"n={c.n} k={c.k}", f"label {key}"])
            (out / f"code{i:04d}.txt").write_text(text)
        (out / "labels.txt").write_text("".join(k + "\n" for k in res.labels))
        (out / "stats.json").write_text(json.dumps(stats, sort_keys=True, indent=1) + "\n")
    if args.format == "json":
        print(json.dumps({"count": len(res), "labels": res.labels,
                          "lengths": [c.n for c in res.codes], "stats": stats}, sort_keys=True))
    else:
        noun = {"classify": "codes", "extend": "extensions", "lengthen": "codes"}[args.command]
        print(f"{len(res)} {noun}")
        for c, key in zip(res.codes, res.labels):
            print(f"  [{c.n},{c.k}] {key}")
    print(f"wall time {res.stats.wall_time:.1f}s", file=sys.stderr)


def _out(args) -> Path | None:
    return Path(args.out) if args.out else None


def cmd_extend(args) -> int:
    seed = load_code(args.seed)
    top = args.max_len if args.max_len is not None else seed.n + args.new_coords
    spec = SearchSpec(top, seed.k + 1, _rule(args), Mode.EXTEND_DIMENSION, (seed,),
                      new_coords_max=args.new_coords if args.new_coords is not None else top - seed.n,
                      exact_length=args.full_length)
    spec.allowed()
    _write_results(engine.extend_dimension(spec), _out(args), args)
    return EXIT_OK


def cmd_lengthen(args) -> int:
    seeds = tuple(load_code(s) for s in args.seed)
    spec = SearchSpec(args.length, args.dim, _rule(args), Mode.EXTEND_LENGTH, seeds,
                      exact_length=args.full_length, residual_weight=args.residual_weight)
    spec.allowed()
    _write_results(engine.lengthen_from_residual(spec), _out(args), args)
    return EXIT_OK


def cmd_classify(args) -> int:
    spec = SearchSpec(args.length, args.dim, _rule(args), Mode.CLASSIFY,
                      exact_length=args.full_length)
    spec.allowed()

    def progress(k, count):
        print(f"dimension {k}: {count} codes", file=sys.stderr)

    res = engine.classify(spec, jobs=args.jobs, checkpoint=args.checkpoint, progress=progress)
    _write_results(res, _out(args), args)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verification

    total = failed = 0
    t0 = time.perf_counter()
    for chk in verification.run(args.tier, jobs=args.jobs, checkpoint=args.checkpoint):
        total += 1
        failed += not chk.passed
        rec = chk.as_dict()
        if not args.timings:
            rec.pop("seconds")
        print(json.dumps(rec, sort_keys=True), flush=True)
    summary = {"summary": True, "tier": args.tier, "checks": total, "failed": failed,
               "passed": failed == 0}
    print(json.dumps(summary, sort_keys=True))
    print(f"{total - failed}/{total} checks passed in {time.perf_counter() - t0:.1f}s",
          file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_FAIL


# parser -----------------------------------------------------------------------


def _search_flags(p: argparse.ArgumentParser, weights_required: bool = False):
    p.add_argument("--weights", type=int_list, required=weights_required,
                   help="allowed nonzero weights, comma separated")
    p.add_argument("--divisible", type=int, default=1, metavar="D",
                   help="allowed weights must be multiples of D")
    p.add_argument("--min-distance", type=int, default=1, metavar="D")
    p.add_argument("--full-length", action="store_true",
                   help="length must equal the bound instead of staying below it")
    p.add_argument("--out", metavar="DIR", help="write matrices, labels and stats here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="divcodes", description=__doc__.splitlines()[0])
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--fixtures", metavar="DIR",
                    help=f"fixture directory (default: ${fixtures.ENV_DIR} or the bundled set)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="parameters, enumerator and moment residuals")
    p.add_argument("code")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dual", help="generator matrix of the dual code")
    p.add_argument("code")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("residual", help="residual code with respect to a codeword")
    p.add_argument("code")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--word", help="codeword as a 0/1 string")
    g.add_argument("--index", type=int, help="codeword by message index")
    g.add_argument("--weight", type=int, help="first codeword of this weight")
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("canonical", help="canonical generator matrix and automorphism group order")
    p.add_argument("code")
    p.set_defaults(func=cmd_canonical)

    p = sub.add_parser("equivalent", help="are two codes equal up to coordinate permutation")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_equivalent)

    p = sub.add_parser("moments", help="power moment residuals, or the a40 closed forms")
    p.add_argument("code", nargs="?")
    p.add_argument("--closed-form", type=int, metavar="N")
    for name in ("a2", "a3", "a56", "a64"):
        p.add_argument(f"--{name}", type=int, default=0)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("extend", help="one-dimensional extensions of a seed code")
    p.add_argument("--seed", required=True)
    p.add_argument("--max-len", type=int)
    p.add_argument("--new-coords", type=int, help="most appended coordinates (default: up to --max-len)")
    _search_flags(p, weights_required=True)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("lengthen", help="codes with a weight-w word whose residual is a seed")
    p.add_argument("--seed", action="append", required=True)
    p.add_argument("--residual-weight", type=int, required=True, metavar="W")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--dim", type=int)
    _search_flags(p)
    p.set_defaults(func=cmd_lengthen)

    p = sub.add_parser("classify", help="all codes with the given parameters up to equivalence")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checkpoint", metavar="FILE")
    _search_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-paper", help="re-derive every published claim; JSON lines")
    p.add_argument("--tier", choices=("fast", "search", "long"), default="fast")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checkpoint", metavar="FILE")
    p.add_argument("--timings", action="store_true", help="include per-check seconds")
    p.set_defaults(func=cmd_verify)
    return ap


def _validate(args, ap: argparse.ArgumentParser):
    for name in ("length", "dim", "max_len", "new_coords", "residual_weight"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            ap.error(f"--{name.replace('_', '-')} must be non-negative")
    if getattr(args, "divisible", 1) < 1:
        ap.error("--divisible must be positive")
    if getattr(args, "jobs", 1) < 1:
        ap.error("--jobs must be positive")
    if args.command == "extend" and args.max_len is None and args.new_coords is None:
        ap.error("extend needs --max-len or --new-coords")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _validate(args, ap)
    if args.fixtures:
        saved = os.environ.get(fixtures.ENV_DIR)
        os.environ[fixtures.ENV_DIR] = args.fixtures
    try:
        return args.func(args)
    except (UsageError, ParseError, KeyError, CodeError) as e:
        print(f"divcodes: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if args.fixtures:
            if saved is None:
                os.environ.pop(fixtures.ENV_DIR, None)
            else:
                os.environ[fixtures.ENV_DIR] = saved


if __name__ == "__main__":
    sys.exit(main())
