"""Generator matrices of the nodal-surface codes, with their known invariants.

Each matrix lives in ``data/<id>.txt`` as rows of ``0``/``1``; ``manifest.json``
records a checksum per file and the expectations that :func:`verify_all`
re-derives from scratch.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .. import gf2
from ..codes import Code, WeightEnumerator, divisibility, minimum_distance
from ..errors import ParseError

ENV_DIR = "DIVCODES_FIXTURES"


def data_dir() -> Path:
    env = os.environ.get(ENV_DIR)
    return Path(env) if env else Path(__file__).with_name("data")


@dataclass(frozen=True)
class FixtureEntry:
    id: str
    code: Code
    description: str
    expected: dict = field(default_factory=dict)

    @property
    def matrix(self) -> gf2.BitMatrix:
        return self.code.gen

    @property
    def enumerator(self) -> WeightEnumerator | None:
        e = self.expected.get("enumerator")
        if e is None:
            return None
        return WeightEnumerator.from_dict(self.code.n, {int(w): a for w, a in e.items()})


@lru_cache(maxsize=4)
def _manifest(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read fixture manifest: {e}") from e


def manifest(directory: Path | None = None) -> dict:
    d = Path(directory) if directory else data_dir()
    return _manifest(str(d / "manifest.json"))


def ids(directory: Path | None = None) -> list[str]:
    return list(manifest(directory)["fixtures"])


def resolve(name: str, directory: Path | None = None) -> str:
    m = manifest(directory)
    name = m.get("aliases", {}).get(name, name)
    if name not in m["fixtures"]:
        raise KeyError(f"unknown fixture {name!r}")
    return name


def load(name: str, directory: Path | None = None) -> FixtureEntry:
    d = Path(directory) if directory else data_dir()
    fid = resolve(name, d)
    rec = manifest(d)["fixtures"][fid]
    raw = (d / rec["file"]).read_bytes()
    if hashlib.sha256(raw).hexdigest() != rec["sha256"]:
        raise ParseError(f"checksum mismatch for fixture {fid}")
    m = gf2.parse_matrix(raw.decode())
    if m.ncols != rec["n"] or m.nrows != rec["k"]:
        raise ParseError(f"fixture {fid}: expected {rec['k']}x{rec['n']}, got {m.nrows}x{m.ncols}")
    if gf2.rank(m) != m.nrows:
        raise ParseError(f"fixture {fid}: rows are dependent")
    return FixtureEntry(fid, Code(m), rec.get("description", ""), rec.get("expected", {}))


def load_code(name: str) -> Code:
    return load(name).code


def expectations_only(directory: Path | None = None) -> dict:
    """Codes known only through their invariants (no matrix available)."""
    return manifest(directory).get("expectations_only", {})


def check(entry: FixtureEntry, with_aut: bool = True) -> list[tuple[str, bool, str]]:
    """(name, passed, detail) for every expectation attached to ``entry``."""
    c = entry.code
    exp = entry.expected
    out = []
    if "enumerator" in exp:
        got = c.weight_enumerator.as_dict()
        want = {int(w): a for w, a in exp["enumerator"].items()}
        out.append(("enumerator", got == want, str(got)))
    if "weights_within" in exp:
        ws = c.nonzero_weights()
        out.append(("weights", set(ws) <= set(exp["weights_within"]), str(ws)))
    if "divisibility" in exp:
        dv = divisibility(c)
        out.append(("divisibility", dv == exp["divisibility"], str(dv)))
    if "d" in exp:
        d = minimum_distance(c)
        out.append(("d", d == exp["d"], str(d)))
    if "projective" in exp:
        out.append(("projective", c.projective == exp["projective"], str(c.projective)))
    if "aut_order" in exp and with_aut:
        from ..canonical import aut_group_order

        a = aut_group_order(c)
        out.append(("aut_order", a == exp["aut_order"], str(a)))
    return out


def verify_all(with_aut: bool = True) -> dict[str, list[tuple[str, bool, str]]]:
    return {fid: check(load(fid), with_aut) for fid in ids()}
