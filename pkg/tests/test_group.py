import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shearcst.group import (BASIS, IDENTITY, X1, X2, X3, X4, AlgebraVector, GroupElement,
                            HeisenbergElement, bracket, casimir_coefficients, casimir_value,
                            embed_heisenberg, inverse, multiply)

coord = st.floats(-50, 50, allow_nan=False)
elements = st.builds(GroupElement, coord, coord, coord, coord)
h_elements = st.builds(HeisenbergElement, coord, coord, coord)


def close(g, h, tol=1e-12):
    a, b = g.as_array(), h.as_array()
    return np.allclose(a, b, rtol=tol, atol=tol * max(1.0, np.abs(a).max(), np.abs(b).max()))


def test_multiply_frozen_example():
    assert multiply(GroupElement(1, 0, 0, 0), GroupElement(0, 1, 0, 0)) == GroupElement(1, 1, 1, 0.5)


def test_inverse_frozen_examples():
    assert inverse(IDENTITY) == IDENTITY
    # x4 from 1 + x4' + 1 * 0 + (1/2) * 1 * (-1) = 0
    assert inverse(GroupElement(1, 1, 1, 1)) == GroupElement(-1, -1, 0, -0.5)
    assert multiply(GroupElement(1, 1, 1, 1), GroupElement(-1, -1, 0, -0.5)) == IDENTITY


def test_associativity_frozen_triple():
    a, b, c = GroupElement(1, 1, 0, 0), GroupElement(1, 0, 1, 0), GroupElement(0, 1, 0, 0)
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_operator_matches_function():
    g, h = GroupElement(0.5, -1, 2, 3), GroupElement(1.5, 2, -0.5, 1)
    assert g * h == multiply(g, h)


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        GroupElement(np.nan, 0, 0, 0)


@given(elements)
def test_identity_is_neutral(g):
    assert multiply(g, IDENTITY) == g
    assert multiply(IDENTITY, g) == g


@settings(max_examples=300)
@given(elements, elements, elements)
def test_associativity(a, b, c):
    assert close(multiply(multiply(a, b), c), multiply(a, multiply(b, c)), 1e-12)


@given(elements)
def test_inverse_both_sides(g):
    # the products cancel terms of size |g|^3, so the error scales with it
    scale = (1.0 + np.abs(g.as_array()).max()) ** 3
    for e in (multiply(g, inverse(g)), multiply(inverse(g), g)):
        assert np.abs(e.as_array()).max() <= 1e-14 * scale


@given(h_elements, h_elements)
def test_heisenberg_embedding_is_homomorphism(h, k):
    assert close(embed_heisenberg(h * k), multiply(embed_heisenberg(h), embed_heisenberg(k)))


def test_heisenberg_embedding_slots():
    assert embed_heisenberg(HeisenbergElement(1.0, 2.0, 3.0)) == GroupElement(1.0, 0.0, 2.0, 3.0)


def test_bracket_table():
    assert bracket(X1, X2) == X3
    assert bracket(X1, X3) == X4
    assert bracket(X2, X1) == -1 * X3
    zero = AlgebraVector()
    for i, j in [(0, 3), (1, 2), (1, 3), (2, 3)]:
        assert bracket(BASIS[i], BASIS[j]) == zero
    for X in BASIS:
        assert bracket(X, X) == zero


vec = st.builds(AlgebraVector, coord, coord, coord, coord)


@given(vec, vec, vec)
def test_bracket_jacobi_and_antisymmetry(u, v, w):
    np.testing.assert_allclose(bracket(u, v).as_array(), -bracket(v, u).as_array(), atol=1e-9)
    jac = (bracket(u, bracket(v, w)) + bracket(v, bracket(w, u)) + bracket(w, bracket(u, v)))
    np.testing.assert_allclose(jac.as_array(), 0.0, atol=1e-6 * (1 + np.abs(u.as_array()).max()) ** 3)


def test_casimir_is_central_in_the_algebra():
    # X3^2 - 2 X2 X4 commutes with every generator: check with the bracket as a derivation
    coeffs = casimir_coefficients()
    assert coeffs == {("X3", "X3"): 1.0, ("X2", "X4"): -2.0}
    names = dict(zip(("X1", "X2", "X3", "X4"), BASIS))
    for Y in BASIS:
        # [Y, AB] = [Y, A] B + A [Y, B]; collect as a dict of ordered words
        total = {}
        for (a, b), c in coeffs.items():
            A, B = names[a], names[b]
            for left, right in ((bracket(Y, A), B), (A, bracket(Y, B))):
                for i, ci in enumerate(left.as_array()):
                    for k, ck in enumerate(right.as_array()):
                        if ci * ck:
                            key = tuple(sorted((i, k)))  # X3, X4 central in the products that occur
                            total[key] = total.get(key, 0.0) + c * ci * ck
        assert all(abs(v) < 1e-15 for v in total.values())


def test_casimir_value(p):
    assert casimir_value(p.h2, p.hbar4) == pytest.approx(8 * np.pi ** 2 * p.h2 * p.hbar4, rel=1e-15)
