from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stabgrid.errors import DomainError
from stabgrid.gf2 import (
    BitMatrix,
    in_row_space,
    pack_int,
    rank,
    row_space_equal,
    rref,
    stack,
    unpack_int,
    words_for,
)

from _oracles import gf2_rank_ints, gf2_span


def test_words_for():
    assert words_for(1) == 1
    assert words_for(64) == 1
    assert words_for(65) == 2


@given(st.integers(0, 2**200 - 1))
def test_pack_unpack_roundtrip(value):
    ncols = max(value.bit_length(), 1)
    assert unpack_int(pack_int(value, ncols)) == value


def test_pack_rejects_overflow():
    with pytest.raises(DomainError):
        pack_int(4, 2)


@pytest.mark.parametrize("ncols", [5, 64, 65, 130])
def test_rank_matches_oracle(backend, ncols):
    rng = random.Random(1234 + ncols)
    for _ in range(12):
        nrows = rng.randrange(1, 14)
        rows = [rng.getrandbits(ncols) for _ in range(nrows)]
        m = BitMatrix.from_int_rows(rows, ncols)
        assert rank(m) == gf2_rank_ints(rows)


def test_rank_empty_and_zero(backend):
    assert rank(BitMatrix.from_int_rows([], 8)) == 0
    assert rank(BitMatrix.from_int_rows([0, 0], 8)) == 0


def test_rref_idempotent_and_preserves_row_space(backend):
    rng = random.Random(7)
    for _ in range(10):
        rows = [rng.getrandbits(12) for _ in range(6)]
        m = BitMatrix.from_int_rows(rows, 12)
        r = rref(m)
        assert row_space_equal(m, r)
        assert r.int_rows() == rref(r).int_rows()
        # canonical form: every span equals the span of the nonzero rref rows
        assert gf2_span([x for x in r.int_rows() if x]) == gf2_span(rows)


def test_in_row_space_matches_enumeration(backend):
    rng = random.Random(99)
    rows = [rng.getrandbits(10) for _ in range(5)]
    m = BitMatrix.from_int_rows(rows, 10)
    span = gf2_span(rows)
    for v in range(2**10):
        assert in_row_space(v, m) == (v in span)


def test_row_space_equal_requires_same_width(backend):
    a = BitMatrix.from_int_rows([1], 2)
    b = BitMatrix.from_int_rows([1], 3)
    with pytest.raises(DomainError):
        row_space_equal(a, b)


def test_stack_ranks(backend):
    rng = random.Random(3)
    rows1 = [rng.getrandbits(20) for _ in range(4)]
    rows2 = [rng.getrandbits(20) for _ in range(4)]
    m1 = BitMatrix.from_int_rows(rows1, 20)
    m2 = BitMatrix.from_int_rows(rows2, 20)
    s = stack([m1, m2])
    assert s.nrows == 8
    assert rank(s) == gf2_rank_ints(rows1 + rows2)
    # stacking a matrix with itself never raises the rank
    assert rank(stack([m1, m1])) == rank(m1)


@given(st.lists(st.integers(0, 2**16 - 1), min_size=1, max_size=8))
def test_rank_bounds_property(rows):
    m = BitMatrix.from_int_rows(rows, 16)
    r = rank(m)
    assert 0 <= r <= min(len(rows), 16)
    assert (r == 0) == all(v == 0 for v in rows)


@given(
    st.lists(st.integers(0, 2**12 - 1), min_size=1, max_size=6),
    st.lists(st.integers(0, 2**12 - 1), min_size=1, max_size=6),
)
def test_row_space_equal_iff_same_span(rows1, rows2):
    m1 = BitMatrix.from_int_rows(rows1, 12)
    m2 = BitMatrix.from_int_rows(rows2, 12)
    assert row_space_equal(m1, m2) == (gf2_span(rows1) == gf2_span(rows2))
