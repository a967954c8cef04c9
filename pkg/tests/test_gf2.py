import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divcodes import fixtures, gf2
from divcodes.errors import ParseError
from divcodes.gf2 import BitMatrix


def matrices(max_rows=8, max_cols=12):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.integers(0, (1 << n) - 1), max_size=max_rows).map(
            lambda rows: BitMatrix(tuple(rows), n)))


def test_rref_identity():
    m = BitMatrix.identity(2)
    r, rank = gf2.rref(m)
    assert r == m and rank == 2


def test_rref_duplicate_rows():
    r, rank = gf2.rref(BitMatrix.from_strings(["11", "11"]))
    assert rank == 1
    assert r.to_strings() == ["11"]


def test_rref_full_rank_fixture():
    # the printed 12-row matrix of the [65,12] code has full rank
    m = gf2.parse_matrix((fixtures.data_dir() / "code65_12.txt").read_text())
    assert gf2.rank(m) == 12


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rref_idempotent_and_same_space(m):
    r, rank = gf2.rref(m)
    r2, rank2 = gf2.rref(r)
    assert r2 == r and rank2 == rank
    assert all(gf2.in_row_space(row, r) for row in m.rows)
    assert all(gf2.in_row_space(row, m) for row in r.rows)
    piv = gf2.pivots(r)
    assert piv == sorted(piv)
    # reduced: each pivot column has a single one
    for i, p in enumerate(piv):
        assert [(row >> p) & 1 for row in r.rows] == [int(j == i) for j in range(rank)]


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_nullspace_duality(m):
    ns = gf2.nullspace_basis(m)
    r, rank = gf2.rref(m)
    assert ns.nrows == m.ncols - rank
    for a in ns.rows:
        for b in m.rows:
            assert (a & b).bit_count() % 2 == 0
    back = gf2.nullspace_basis(ns)
    assert gf2.same_row_space(back, r)


def test_nullspace_all_ones():
    ns = gf2.nullspace_basis(BitMatrix(((1 << 7) - 1,), 7))
    assert ns.nrows == 6
    assert all(r.bit_count() % 2 == 0 for r in ns.rows)


def test_nullspace_identity_empty():
    assert gf2.nullspace_basis(BitMatrix.identity(5)).nrows == 0


def test_kummer_nullspace_round_trip(fx):
    g = fx("kummer16").gen
    ns = gf2.nullspace_basis(g)
    assert ns.shape == (11, 16)
    assert gf2.same_row_space(gf2.nullspace_basis(ns), g)


def test_iterate_codewords_counts(fx):
    assert list(gf2.iterate_codewords(BitMatrix.empty(4))) == [0]
    words = list(gf2.iterate_codewords(fx("kummer16").gen))
    assert len(words) == len(set(words)) == 32
    words = list(gf2.iterate_codewords(fx("quintic31").gen))
    assert len(set(words)) == 32
    assert sum(w.bit_count() == 16 for w in words) == 31


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=6))
def test_codeword_table_matches_iteration(m):
    r, _ = gf2.rref(m)
    table = gf2.unpack(gf2.codeword_table(r))
    assert sorted(table) == sorted(gf2.iterate_codewords(r))


@pytest.mark.parametrize("n", [16, 64, 96])
def test_weight_identity(n):
    r = random.Random(n)
    for _ in range(1000):
        u, v = r.getrandbits(n), r.getrandbits(n)
        assert gf2.popcount(u ^ v) == gf2.popcount(u) + gf2.popcount(v) - 2 * gf2.popcount(u & v)


@pytest.mark.parametrize("n", [16, 64, 96, 130])
def test_pack_round_trip(n):
    r = random.Random(n)
    vecs = [r.getrandbits(n) for _ in range(50)]
    words = gf2.pack(vecs, n)
    assert words.shape[1] == gf2.nwords(n)
    if n <= 128:
        assert words.shape[1] <= 2
    assert gf2.unpack(words) == vecs
    assert gf2.row_weights(words).tolist() == [v.bit_count() for v in vecs]


def test_parse_and_format():
    text = "# comment\n1010\n0110\n\n"
    m = gf2.parse_matrix(text)
    assert m.shape == (2, 4)
    assert gf2.parse_matrix(gf2.format_matrix(m, ["x"])) == m
    assert m.to_array().tolist() == [[1, 0, 1, 0], [0, 1, 1, 0]]


@pytest.mark.parametrize("text", ["", "# only\n", "101\n10\n", "1021\n"])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        gf2.parse_matrix(text)


def test_permute_and_select():
    m = BitMatrix.from_strings(["1100", "0011"])
    assert m.permute_columns([2, 3, 0, 1]).to_strings() == ["0011", "1100"]
    assert m.select_columns([0, 2]).to_strings() == ["10", "01"]
    with pytest.raises(ValueError):
        m.permute_columns([0, 0, 1, 2])
    assert np.array_equal(BitMatrix.from_array(m.to_array()).to_array(), m.to_array())
