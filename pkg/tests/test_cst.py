import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shearcst.cst import (FiducialSpec, closed_form_slice, cst_closed_form, cst_point, cst_slice,
                          cst_volume, inner_product_x2, make_fiducial, norm_x2, reconstruct,
                          squeezed_state)
from shearcst.errors import DomainTooNarrow, GridMismatch
from shearcst.grids import ModelParams, PhaseSlice, SampledLine, UniformGrid
from shearcst.group import GroupElement
from shearcst.verify import random_state


def rel(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


# --- fiducials ------------------------------------------------------------------

def test_unit_gaussian_has_unit_constant(grid64, p):
    # 2 h2 E = 1 makes the normalising constant equal to one
    phi = make_fiducial(FiducialSpec("gaussian", 1.0), grid64, p)
    np.testing.assert_allclose(phi.values, np.exp(-np.pi * grid64.points ** 2), rtol=1e-15)


def test_generic_with_zero_a_is_gaussian(grid64, p):
    a = make_fiducial(FiducialSpec("generic", 1.3, 0.0), grid64, p)
    b = make_fiducial(FiducialSpec("gaussian", 1.3), grid64, p)
    np.testing.assert_array_equal(a.values, b.values)


def test_generic_fiducial_is_a_chirped_gaussian(grid64, p):
    a = make_fiducial(FiducialSpec("generic", 1.3, 0.4), grid64, p)
    b = make_fiducial(FiducialSpec("gaussian", 1.3), grid64, p)
    np.testing.assert_allclose(np.abs(a.values), np.abs(b.values), rtol=1e-14)
    assert a.norm() == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 4.0), st.sampled_from(["dimensionless", "lebesgue"]))
def test_fiducial_unit_norm(E, measure):
    p = ModelParams()
    g = UniformGrid.centered(128, 1 / math.sqrt(128))
    assert make_fiducial(FiducialSpec("gaussian", E, 0.0, measure), g, p).norm() == pytest.approx(1.0, abs=1e-12)


def test_domain_too_narrow(p):
    with pytest.raises(DomainTooNarrow):
        make_fiducial(FiducialSpec("gaussian", 0.2), UniformGrid.centered(16, 0.1), p)


def test_fiducial_spec_validation():
    with pytest.raises(ValueError):
        FiducialSpec("gaussian", -1.0)
    with pytest.raises(ValueError):
        FiducialSpec("gaussian", 1.0, 0.5)
    with pytest.raises(ValueError):
        FiducialSpec("other", 1.0)


# --- closed form ------------------------------------------------------------------

def test_closed_form_at_origin(p):
    for E in (0.5, 1.0, 2.5):
        assert cst_closed_form(E, E, 0.0, 0.0, 0.0, p) == pytest.approx(1.0, abs=1e-15)


def test_closed_form_decays(p):
    assert abs(cst_closed_form(1.0, 1.0, 0.0, 0.0, 30.0, p)) < 1e-100


def test_closed_form_branch_is_continuous_in_x2(p):
    x2 = np.linspace(-200, 200, 40001)
    v = cst_closed_form(1.0, 1.5, 0.1, x2, 0.2, p) * np.exp(2j * np.pi * p.h2 * x2)
    # no sign flips between neighbouring samples of the principal-branch square root
    assert np.max(np.abs(np.diff(v))) < 0.05 * np.max(np.abs(v))


@pytest.mark.parametrize("q,E", [(1.0, 1.0), (1.0, 1.5), (2.0, 0.7)])
@pytest.mark.parametrize("x2", [0.0, 0.25, -0.5])
def test_pipeline_matches_closed_form(grid64, p, q, E, x2):
    S = cst_slice(squeezed_state(q, grid64, p), squeezed_state(E, grid64, p), x2, p)
    ref = closed_form_slice(q, E, S.grid1, S.grid3, x2, p)
    assert rel(S.values, ref.values) < 1e-8


def test_self_transform_at_origin_lebesgue(grid64, p):
    phi = make_fiducial(FiducialSpec("gaussian", 1.0, 0.0, "lebesgue"), grid64, p)
    S = cst_slice(phi, phi, 0.0, p)
    i0, k0 = S.grid1.zero_index, S.grid3.zero_index
    assert S.values[i0, k0] == pytest.approx(1.0, abs=1e-14)


def test_pipeline_matches_direct_quadrature(grid64, p, rng):
    f = random_state(rng, grid64, p)
    phi = squeezed_state(1.5, grid64, p)
    S = cst_slice(f, phi, 0.3, p)
    x1, x3 = S.grid1.points, S.grid3.points
    worst = 0.0
    for i in range(0, 64, 8):
        for k in range(0, 64, 8):
            direct = cst_point(f, phi, GroupElement(x1[i], 0.3, x3[k], 0.0), p)
            worst = max(worst, abs(direct - S.values[i, k]))
    assert worst < 1e-8 * np.abs(S.values).max()


def test_central_covariance(grid64, p, rng):
    f = random_state(rng, grid64, p)
    phi = squeezed_state(1.5, grid64, p)
    g = GroupElement(3 * grid64.step, 0.2, 0.4, 0.1)
    h = GroupElement(0, 0, 0, 0.33)
    lhs = cst_point(f, phi, g * h, p)
    rhs = np.exp(-2j * np.pi * p.hbar4 * 0.33) * cst_point(f, phi, g, p)
    assert abs(lhs - rhs) < 1e-10


def test_grid_mismatch(grid64, grid128, p):
    with pytest.raises(GridMismatch):
        cst_slice(squeezed_state(1.0, grid64, p), squeezed_state(1.0, grid128, p), 0.0, p)
    a = squeezed_state(1.0, grid64, p)
    b = squeezed_state(1.0, grid64, p, "lebesgue")
    with pytest.raises(GridMismatch):
        cst_slice(a, b, 0.0, p)


# --- isometry, orthogonality, reconstruction --------------------------------------

@pytest.mark.parametrize("x2", [-0.5, -0.25, 0.0, 0.25, 0.5])
def test_isometry(grid128, p, rng, x2):
    phi = squeezed_state(1.5, grid128, p)
    for _ in range(4):
        f = random_state(rng, grid128, p)
        assert abs(norm_x2(cst_slice(f, phi, x2, p), p) - f.norm()) < 1e-6 * f.norm()


def test_orthogonality_relation(grid128, p, rng):
    phi1 = squeezed_state(1.5, grid128, p)
    phi2 = make_fiducial(FiducialSpec("generic", 0.9, 0.3), grid128, p)
    for x2 in (-0.3, 0.0, 0.4):
        f1, f2 = random_state(rng, grid128, p), random_state(rng, grid128, p)
        lhs = inner_product_x2(cst_slice(f1, phi1, x2, p), cst_slice(f2, phi2, x2, p), p)
        rhs = f1.inner(f2) * np.conj(phi1.inner(phi2))
        assert abs(lhs - rhs) < 1e-6 * f1.norm() * f2.norm()


def test_inner_product_is_hermitian_positive(grid64, p, rng):
    phi = squeezed_state(1.0, grid64, p)
    u = cst_slice(random_state(rng, grid64, p), phi, 0.1, p)
    v = cst_slice(random_state(rng, grid64, p), phi, 0.1, p)
    uu = inner_product_x2(u, u, p)
    assert uu.real > 0 and abs(uu.imag) < 1e-14 * uu.real
    assert inner_product_x2(u, v, p) == pytest.approx(np.conj(inner_product_x2(v, u, p)), abs=1e-14)


def test_inner_product_needs_same_x2(grid64, p):
    phi = squeezed_state(1.0, grid64, p)
    with pytest.raises(GridMismatch):
        inner_product_x2(cst_slice(phi, phi, 0.0, p), cst_slice(phi, phi, 0.1, p), p)


def test_norm_independent_of_x2(grid128, p, rng):
    f = random_state(rng, grid128, p)
    phi = squeezed_state(0.8, grid128, p)
    norms = [norm_x2(S, p) for S in cst_volume(f, phi, np.linspace(-1, 1, 9), p).slices]
    assert np.ptp(norms) < 1e-6 * f.norm()


@pytest.mark.parametrize("x2", [0.0, 0.37])
def test_reconstruction(grid128, p, rng, x2):
    f = random_state(rng, grid128, p)
    phi = squeezed_state(1.5, grid128, p)
    back = reconstruct(cst_slice(f, phi, x2, p), phi, p)
    assert rel(back.values, f.values) < 1e-6


def test_two_vector_reconstruction(grid128, p, rng):
    f = random_state(rng, grid128, p)
    phi = squeezed_state(1.5, grid128, p)
    psi = squeezed_state(0.7, grid128, p)
    back = reconstruct(cst_slice(f, phi, 0.2, p), psi, p)
    assert rel(back.values, psi.inner(phi) * f.values) < 1e-6


def test_reconstruct_zero(grid64, p):
    phi = squeezed_state(1.0, grid64, p)
    S = cst_slice(phi, phi, 0.0, p)
    zero = PhaseSlice(S.grid1, S.grid3, 0.0, np.zeros_like(S.values))
    assert not np.any(reconstruct(zero, phi, p).values)


def test_reconstruct_rejects_foreign_grids(grid64, grid128, p):
    S = cst_slice(*(squeezed_state(1.0, grid64, p),) * 2, 0.0, p)
    with pytest.raises(GridMismatch):
        reconstruct(S, squeezed_state(1.0, grid128, p), p)


def test_transform_is_linear(grid64, p, rng):
    phi = squeezed_state(1.2, grid64, p)
    f, g = random_state(rng, grid64, p), random_state(rng, grid64, p)
    a, b = 0.3 - 1.2j, 2.0 + 0.5j
    h = SampledLine(grid64, a * f.values + b * g.values, f.weight)
    lhs = cst_slice(h, phi, 0.4, p).values
    rhs = a * cst_slice(f, phi, 0.4, p).values + b * cst_slice(g, phi, 0.4, p).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)
