import math
from fractions import Fraction

import pytest

from coeffsieve.bounds import (VaughanParams, count_constrained, deviation, engine_for,
                               expected_count, lambda_char_sum, lambda_correction_observed,
                               orthogonality_aggregate, s1_theorem, s2_theorem, sigma1, sigma2,
                               theorem_rhs, valid_params, vaughan_lhs)
from coeffsieve.charsum import CharTuple, CycInt, enumerate_char_tuples
from coeffsieve.coeffpoly import (CoeffPoly, ConstraintSystem, compose_difference,
                                  compose_with_factor, max_degree_set)
from coeffsieve.field import make_field
from coeffsieve.ranks import tuple_rank
from coeffsieve.upoly import count_irreducible, enumerate_monic, prime_power_correction
from oracles import sigma1_direct, sigma2_direct


def mono(F, n, *idx, c=1):
    e = [0] * n
    for i in idx:
        e[i] += 1
    return CoeffPoly.monomial(F, e, c)


def system(F, n, *polys):
    return ConstraintSystem(F, n, tuple(polys))


def test_count_examples(F3):
    a0 = mono(F3, 2, 0)
    assert count_constrained(system(F3, 2, a0)) == 0
    assert count_constrained(system(F3, 2, a0 - CoeffPoly.constant(F3, 2, 1))) == 1
    assert count_constrained(system(F3, 1, mono(F3, 1, 0))) == 1


def test_deviation_examples(F3):
    a0 = mono(F3, 2, 0)
    assert deviation(system(F3, 2, a0)) == 1
    assert deviation(system(F3, 2, a0 - CoeffPoly.constant(F3, 2, 1))) == 0
    zero = system(F3, 3, CoeffPoly.zero(F3, 3))
    assert deviation(zero) == Fraction(count_irreducible(3, 3) * 2, 3)
    assert expected_count(system(F3, 2, a0)) == 1


def test_vaughan_lhs_example(F3):
    sys = system(F3, 2, mono(F3, 2, 0))
    # irreducibles contribute a0 in {1, 2, 2} with weight 2, squares a0 in {0, 1, 1} weight 1
    assert lambda_char_sum(sys, CharTuple(F3, (1,))).counts == (1, 4, 4)
    assert vaughan_lhs(sys, CharTuple(F3, (1,))) == pytest.approx(3.0, abs=1e-9)
    assert lambda_char_sum(sys, CharTuple(F3, (0,))) == 9
    n1 = system(F3, 1, mono(F3, 1, 0))
    assert vaughan_lhs(n1, CharTuple(F3, (1,))) <= 3


@pytest.mark.parametrize("q,n", [(3, 2), (3, 3), (5, 2), (5, 3), (3, 4)])
def test_orthogonality_and_lambda_accounting(q, n):
    F = make_field(q)
    sys = system(F, n, mono(F, n, 0, n - 1), mono(F, n, 0) - CoeffPoly.constant(F, n, 1))
    agg = orthogonality_aggregate(sys)
    assert agg == CycInt.integer(q, q ** 2 * count_constrained(sys))
    assert lambda_correction_observed(sys) == prime_power_correction(q, n)


def test_valid_params():
    assert valid_params(2) == []
    assert valid_params(3) == [VaughanParams(1, 1)]
    assert len(valid_params(5)) == 6
    with pytest.raises(ValueError):
        VaughanParams(1, 2).check(3)


@pytest.mark.parametrize("q,n,polys", [
    (3, 3, [(0,)]),
    (3, 3, [(0, 1)]),
    (5, 3, [(0, 1)]),
    (3, 4, [(0, 0), (1, 2)]),
])
def test_type_sums_match_direct_summation(q, n, polys):
    F = make_field(q)
    sys = system(F, n, *(mono(F, n, *idx) for idx in polys))
    for psis in list(enumerate_char_tuples(F, sys.m, include_trivial=False))[:4]:
        for pr in valid_params(n):
            assert sigma1(sys, psis, pr) == pytest.approx(sigma1_direct(sys, psis.labels, pr.u, pr.v), abs=1e-7)
            assert sigma2(sys, psis, pr) == pytest.approx(sigma2_direct(sys, psis.labels, pr.u, pr.v), abs=1e-7)


def test_trivial_character_self_test(F3):
    sys = system(F3, 4, mono(F3, 4, 0, 1))
    triv = CharTuple(F3, (0,))
    for pr in valid_params(4):
        assert sigma1(sys, triv, pr) == pytest.approx((pr.u + pr.v + 1) * 3 ** 4)
        assert sigma2(sys, triv, pr) == pytest.approx(3 ** 4)


def _s1_formula(sys, pr, c):
    q, n = sys.ctx.q, sys.n
    j, S = max_degree_set(sys)
    total = 0.0
    for d in range(pr.u + pr.v + 1):
        for g in enumerate_monic(sys.ctx, d):
            r = tuple_rank([compose_with_factor(R, g) for R in sys.polys], S)
            if not r.infinite:
                total += q ** ((n - d) + (n - d) / 2 ** j - c * r.value)
    return total


def _s2_formula(sys, pr, c):
    q, n = sys.ctx.q, sys.n
    j, S = max_degree_set(sys)
    best = 0.0
    for k in pr.k_range(n):
        gs = list(enumerate_monic(sys.ctx, n - k))
        for g1 in gs:
            row = 0.0
            for g2 in gs:
                r = tuple_rank([compose_difference(R, g1, g2, k) for R in sys.polys], S)
                if not r.infinite:
                    row += q ** (k - c * r.value)
            best = max(best, row)
    return best


@pytest.mark.parametrize("R", ["a0a1", "a0a1+a2", "a0^2+a1a2"])
def test_theorem_terms_match_displayed_formula(R):
    F = make_field(5)
    n = 3
    P = {"a0a1": mono(F, n, 0, 1), "a0a1+a2": mono(F, n, 0, 1) + mono(F, n, 2),
         "a0^2+a1a2": mono(F, n, 0, 0) + mono(F, n, 1, 2)}[R]
    sys = system(F, n, P)
    pr = VaughanParams(1, 1)
    for c in (0.25, 1.0):
        assert s1_theorem(sys, pr, c) == pytest.approx(_s1_formula(sys, pr, c), rel=1e-12)
        assert s2_theorem(sys, pr, c) == pytest.approx(_s2_formula(sys, pr, c), rel=1e-12)


def test_rhs_monotone_in_c_and_argmin():
    F = make_field(5)
    sys = system(F, 4, mono(F, 4, 0, 1) + mono(F, 4, 2))
    prev = math.inf
    for c in (0.1, 0.25, 0.5, 1.0, 2.0):
        val, arg = theorem_rhs(sys, c)
        assert val <= prev
        prev = val
        eng = engine_for(sys)
        assert val == min(eng.bound_at(pr, c) for pr in valid_params(4))
        assert eng.bound_at(arg, c) == val


def test_rhs_errors(F5):
    sys = system(F5, 2, mono(F5, 2, 0, 1))
    with pytest.raises(ValueError):
        theorem_rhs(sys, 1.0)
    sys3 = system(F5, 3, mono(F5, 3, 0, 1))
    with pytest.raises(ValueError):
        s1_theorem(sys3, VaughanParams(1, 1), 0.0)


def test_envelopes():
    F = make_field(5)
    sys = system(F, 4, mono(F, 4, 0, 0) + mono(F, 4, 1, 2))
    for psis in enumerate_char_tuples(F, 1, include_trivial=False):
        for pr in valid_params(4):
            assert sigma1(sys, psis, pr) <= (pr.u + pr.v + 1) * 5 ** 4 + 1e-6
            assert sigma2(sys, psis, pr) <= 5 ** 4 + 1e-6
