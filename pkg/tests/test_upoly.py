import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coeffsieve.field import make_field
from coeffsieve.upoly import (UPoly, count_irreducible, divide, enumerate_irreducible,
                              enumerate_monic, factor, format_upoly, irreducible_mask,
                              is_irreducible, monic_index, monic_lower_array, multiply,
                              parse_upoly, von_mangoldt, von_mangoldt_table)
from oracles import irreducible_by_roots_and_division


def P(F, *coeffs):
    return UPoly.from_list(F, coeffs)


def test_multiply_examples(F3):
    assert multiply(P(F3, 1, 1), P(F3, 2, 1)) == P(F3, 2, 0, 1)
    f = P(F3, 1, 2, 1)
    assert multiply(f, P(F3, 1)) == f
    assert multiply(f, P(F3)).is_zero


def test_irreducibility_examples(F3, F5):
    assert is_irreducible(P(F3, 1, 0, 1))
    assert not is_irreducible(P(F3, 0, 1, 1))
    assert is_irreducible(P(F5, 0, 1))


def test_von_mangoldt_examples(F3):
    assert von_mangoldt(P(F3, 0, 0, 0, 0, 1)) == 1
    assert von_mangoldt(P(F3, 1, 0, 1)) == 2
    assert von_mangoldt(P(F3, 0, 1, 1)) == 0
    with pytest.raises(ValueError):
        von_mangoldt(P(F3, 1, 2))


def test_count_examples():
    assert count_irreducible(3, 2) == 3
    assert count_irreducible(7, 1) == 7
    assert count_irreducible(2, 4) == 3


def test_enumeration_examples(F3):
    assert len(list(enumerate_monic(F3, 2))) == 9
    assert {f.coeffs for f in enumerate_irreducible(F3, 2)} == {(1, 0, 1), (2, 1, 1), (2, 2, 1)}
    assert [f.coeffs for f in enumerate_monic(F3, 0)] == [(1,)]


def test_enumeration_order_matches_index(F5):
    lowers = monic_lower_array(5, 3)
    assert np.array_equal(monic_index(5, lowers), np.arange(125))
    assert [f.lower for f in enumerate_monic(F5, 3)] == [tuple(r) for r in lowers.tolist()]


@pytest.mark.parametrize("q,n", [(3, 3), (3, 4), (5, 3), (9, 2), (9, 3)])
def test_sieve_matches_division_oracle(q, n):
    F = make_field(3, 2) if q == 9 else make_field(q)
    mask = irreducible_mask(F, n)
    oracle = [irreducible_by_roots_and_division(f) for f in enumerate_monic(F, n)]
    assert mask.tolist() == oracle


def test_von_mangoldt_table_matches_factorization(F3):
    table = von_mangoldt_table(F3, 4)
    assert table.tolist() == [von_mangoldt(f) for f in enumerate_monic(F3, 4)]


def test_text_round_trip(F9):
    f = UPoly.from_list(F9, [[1, 2], 0, [0, 1], 1])
    assert parse_upoly(F9, format_upoly(f)) == f
    F3 = make_field(3)
    assert format_upoly(P(F3, 1, 0, 1)) == "1,0,1"


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=6),
       st.lists(st.integers(0, 4), min_size=1, max_size=4))
def test_division_identity(a, b):
    F = make_field(5)
    f, g = UPoly.from_list(F, a), UPoly.from_list(F, b + [1])
    q, r = divide(f, g)
    assert multiply(q, g) + r == f
    assert r.is_zero or r.degree < g.degree


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_factorization_multiplies_back(lower):
    F = make_field(3)
    f = UPoly.monic(F, lower)
    prod = P(F, 1)
    for g, e in factor(f):
        assert is_irreducible(g)
        for _ in range(e):
            prod = multiply(prod, g)
    assert prod == f
