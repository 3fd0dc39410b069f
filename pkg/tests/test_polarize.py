import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coeffsieve.coeffpoly import CoeffPoly, all_monomials
from coeffsieve.field import make_field
from coeffsieve.polarize import (MultiTensor, PolarizationError, combine_tensors, delta, diagonal,
                                 diagonal_identity_check, polarization,
                                 polarization_by_symmetrization, tensor_eval, tensor_from_json)


def poly(F, n, terms):
    return CoeffPoly(F, n, terms)


def test_delta_examples(F3):
    R = poly(F3, 2, {(1, 1): 1})
    # variables (a0, a1, h0, h1)
    assert delta(R) == poly(F3, 4, {(1, 0, 0, 1): 1, (0, 1, 1, 0): 1, (0, 0, 1, 1): 1})
    assert delta(poly(F3, 1, {(1,): 1})) == poly(F3, 2, {(0, 1): 1})
    assert delta(CoeffPoly.constant(F3, 2, 2)).is_zero


def test_polarization_examples(F3):
    assert polarization(poly(F3, 2, {(1, 1): 1})).entries == {(0, 1): 1, (1, 0): 1}
    assert polarization(poly(F3, 1, {(2,): 1})).entries == {(0, 0): 2}
    assert polarization(poly(F3, 1, {(1,): 1})).entries == {(0,): 1}


def test_polarization_rejects_constants(F3):
    with pytest.raises(PolarizationError):
        polarization(CoeffPoly.constant(F3, 2, 1))


def test_tensor_eval_examples(F3):
    T = polarization(poly(F3, 2, {(1, 1): 1}))
    assert tensor_eval(T, [[1, 0], [0, 1]]) == 1
    assert tensor_eval(T, [[0, 0], [2, 1]]) == 0
    assert tensor_eval(MultiTensor.zero(F3, 3, 2), [[1, 2]] * 3) == 0
    with pytest.raises(ValueError):
        tensor_eval(T, [[1, 0]])


def test_diagonal_identity_examples(F3, F5):
    assert diagonal_identity_check(poly(F5, 1, {(2,): 1}))
    assert diagonal(polarization(poly(F5, 1, {(2,): 1}))) == poly(F5, 1, {(2,): 2})
    assert diagonal_identity_check(poly(F3, 2, {(1, 0): 2, (0, 1): 1}))
    assert diagonal_identity_check(poly(F3, 2, {(1, 1): 1, (1, 0): 1}))


def test_diagonal_identity_needs_small_degree(F3):
    with pytest.raises(PolarizationError):
        diagonal_identity_check(poly(F3, 1, {(3,): 1}))


def _all_polys(F, k, deg):
    basis = [m for d in range(deg + 1) for m in all_monomials(k, d)]
    for coeffs in itertools.product(range(F.q), repeat=len(basis)):
        yield CoeffPoly(F, k, dict(zip(basis, coeffs)))


@pytest.mark.parametrize("k", [1, 2])
def test_exhaustive_f3(F3, k):
    for R in _all_polys(F3, k, 2):
        if R.degree is None or R.degree < 1:
            continue
        T = polarization(R)
        assert T.is_symmetric()
        assert T.key() == polarization_by_symmetrization(R).key()
        assert diagonal_identity_check(R)


def test_multilinear_and_symmetric_cubic(F5):
    R = poly(F5, 2, {(3, 0): 1, (1, 2): 3, (0, 2): 4, (1, 0): 2})
    T = polarization(R)
    assert T.order == 3 and T.is_symmetric()
    rng = np.random.default_rng(3)
    for _ in range(50):
        x, y, z, w = rng.integers(0, 5, size=(4, 2)).tolist()
        a = int(rng.integers(0, 5))
        xz = [F5.add(F5.mul(a, s), t) for s, t in zip(x, w)]
        lhs = tensor_eval(T, [xz, y, z])
        rhs = F5.add(F5.mul(a, tensor_eval(T, [x, y, z])), tensor_eval(T, [w, y, z]))
        assert lhs == rhs
        assert tensor_eval(T, [x, y, z]) == tensor_eval(T, [z, x, y])


def test_polarization_is_linear(F5):
    R = poly(F5, 2, {(1, 1): 1, (2, 0): 3, (0, 1): 1})
    Q = poly(F5, 2, {(0, 2): 2, (1, 0): 4})
    lhs = polarization(R.scale(2) + Q.scale(3))
    rhs = combine_tensors([polarization(R), polarization(Q)], [2, 3])
    assert lhs.key() == rhs.key()


def test_tensor_json_round_trip(F5):
    T = polarization(poly(F5, 3, {(1, 1, 1): 2, (0, 0, 3): 1}))
    assert tensor_from_json(F5, T.to_json()).key() == T.key()


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_sampled_cubics_f5(data):
    F = make_field(5)
    k = data.draw(st.integers(1, 3))
    basis = [m for d in range(4) for m in all_monomials(k, d)]
    coeffs = data.draw(st.lists(st.integers(0, 4), min_size=len(basis), max_size=len(basis)))
    R = CoeffPoly(F, k, dict(zip(basis, coeffs)))
    if R.degree is None or R.degree < 1:
        return
    T = polarization(R)
    assert T.is_symmetric()
    assert T.key() == polarization_by_symmetrization(R).key()
    assert diagonal_identity_check(R)
