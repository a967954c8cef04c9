import os
import random

import numpy as np
import pytest

from divcodes import fixtures
from divcodes.codes import Code
from divcodes.gf2 import BitMatrix


def pytest_collection_modifyitems(config, items):
    if os.environ.get("DIVCODES_LONG") == "1":
        return
    skip = pytest.mark.skip(reason="long tier; set DIVCODES_LONG=1")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def fx():
    """Fixture codes by id, loaded once."""
    cache = {}

    def get(fid):
        if fid not in cache:
            cache[fid] = fixtures.load(fid).code
        return cache[fid]

    return get


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture
def nprng():
    return np.random.default_rng(20240917)


def random_code(r: random.Random, n: int, k: int, full: bool = True) -> Code:
    while True:
        c = Code(BitMatrix(tuple(r.getrandbits(n) for _ in range(k)), n))
        if not full or c.full_length:
            return c


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results is None:
        return
    terminalreporter.section("acceptance criteria")
    for num in mod.CRITERIA:
        rec = results.get(num)
        if rec is None:
            terminalreporter.write_line(f"criterion {num:2d} SKIP: not run in this session")
            continue
        status = "PASS" if rec["ok"] else "FAIL"
        detail = f" ({rec['detail']})" if rec["detail"] else ""
        terminalreporter.write_line(f"criterion {num:2d} {status}: {rec['title']}{detail}")
