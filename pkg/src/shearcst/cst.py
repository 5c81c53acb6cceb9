"""Induced coherent state transform on G/Z and its adjoint.

For a state ``f`` and fiducial ``phi`` on a common ``y`` grid,

    W f (x1, x2, x3) = exp(-2 pi i h2 x2) * int f(y) exp(-2 pi i hbar4 (-x3 y + x2 y^2 / 2))
                       conj(phi(y - x1)) dmu(y),

computed as three unitary stages: the shear ``(x1, y) -> (y, y - x1)`` of
``f (x) conj(phi)``, the chirp ``exp(-i pi hbar4 x2 y^2)``, and an
hbar4-scaled inverse DFT in ``y``.

Discretisation. The ``x1`` grid is the ``y`` grid itself (the shift by ``x1``
is an index shift; the grid must contain 0). The ``x3`` grid is the centred
dual grid with step ``1 / (hbar4 N dy)``. With ``y_i = y0 + i dy`` and
``x3_l = s0 + l ds`` the kernel factorises exactly as

    exp(2 pi i hbar4 y_i x3_l) = exp(2 pi i hbar4 y0 s0) * a_i * b_l * exp(2 pi i i l / N),
    a_i = exp(2 pi i hbar4 i dy s0),   b_l = exp(2 pi i hbar4 y0 l ds),

so the sum over ``i`` is ``N * ifft`` between two diagonal phase factors.
On this pair of grids the discrete transform is exactly unitary up to the
zero-fill of shifted fiducial samples.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainTooNarrow, GridMismatch
from .grids import (ModelParams, PhaseSlice, PhaseVolume, SampledLine, UniformGrid,
                    boundary_mass, measure_weight)
from .group import GroupElement
from .representations import apply_pi

TWO_PI_I = 2j * np.pi


@dataclass(frozen=True)
class FiducialSpec:
    kind: str = "gaussian"            # "gaussian" | "generic"
    E: float = 1.0
    a: float = 0.0
    normalization: str = "dimensionless"   # "dimensionless" | "lebesgue"

    def __post_init__(self):
        if self.kind not in ("gaussian", "generic"):
            raise ValueError(f"unknown fiducial kind {self.kind!r}")
        if not self.E > 0:
            raise ValueError("squeeze parameter E must be positive")
        if self.kind == "gaussian" and self.a != 0:
            raise ValueError("gaussian fiducials have a = 0")


def make_fiducial(spec: FiducialSpec, grid: UniformGrid, p: ModelParams) -> SampledLine:
    """Sample a unit-norm fiducial vector under the selected measure."""
    y = grid.points
    weight = measure_weight(spec.normalization, p)
    # |phi|^2 integrates to 1 against weight * dy
    c = (2.0 * p.hbar4 * spec.E) ** 0.25 / np.sqrt(weight)
    exponent = -np.pi * spec.E * p.hbar4 * y ** 2 + 0j
    if spec.kind == "generic":
        exponent = exponent + (1j * np.pi * spec.a * p.hbar4 / 3.0) * y ** 3 \
            + TWO_PI_I * spec.a * p.h2 * y
    values = c * np.exp(exponent)
    ratio = boundary_mass(values)
    if ratio > 1e-12:
        raise DomainTooNarrow(f"fiducial boundary/peak ratio {ratio:.1e}; widen the y grid")
    return SampledLine(grid, values, weight)


def squeezed_state(q: float, grid: UniformGrid, p: ModelParams,
                   normalization: str = "dimensionless") -> SampledLine:
    """Normalised minimal-uncertainty state ``exp(-pi hbar4 q y^2)``."""
    return make_fiducial(FiducialSpec("gaussian", q, 0.0, normalization), grid, p)


def _check_pair(f: SampledLine, phi: SampledLine):
    if not f.grid.same_as(phi.grid):
        raise GridMismatch("state and fiducial must share the y grid")
    if not np.isclose(f.weight, phi.weight):
        raise GridMismatch("state and fiducial must use the same measure")


def _shifted_conj_fiducial(phi: SampledLine) -> np.ndarray:
    """``S[k, i] = conj(phi(y_i - x1_k))`` with x1 on the y grid, zero outside."""
    n = phi.grid.count
    n0 = phi.grid.zero_index
    idx = np.arange(n)[None, :] - np.arange(n)[:, None] + n0
    ok = (idx >= 0) & (idx < n)
    out = np.zeros((n, n), dtype=complex)
    out[ok] = np.conj(phi.values[idx[ok]])
    return out


def _dft_factors(grid: UniformGrid, p: ModelParams):
    dual = grid.dual(p.hbar4)
    n = grid.count
    i = np.arange(n)
    a = np.exp(TWO_PI_I * p.hbar4 * i * grid.step * dual.origin)
    b = np.exp(TWO_PI_I * p.hbar4 * grid.origin * i * dual.step)
    c = np.exp(TWO_PI_I * p.hbar4 * grid.origin * dual.origin)
    return dual, a, b, c


def cst_slice(f: SampledLine, phi: SampledLine, x2: float, p: ModelParams) -> PhaseSlice:
    _check_pair(f, phi)
    grid = f.grid
    y = grid.points
    n = grid.count
    dual, a, b, c = _dft_factors(grid, p)
    chirp = np.exp(-1j * np.pi * p.hbar4 * x2 * y ** 2)
    G = f.weight * (f.values * chirp)[None, :] * _shifted_conj_fiducial(phi)
    W = n * np.fft.ifft(G * a[None, :], axis=1) * b[None, :]
    W *= c * grid.step * np.exp(-TWO_PI_I * p.h2 * x2)
    return PhaseSlice(grid, dual, float(x2), W)


def cst_volume(f: SampledLine, phi: SampledLine, x2s, p: ModelParams) -> PhaseVolume:
    return PhaseVolume.from_slices(cst_slice(f, phi, x2, p) for x2 in np.atleast_1d(x2s))


def cst_point(f: SampledLine, phi: SampledLine, g: GroupElement, p: ModelParams) -> complex:
    """Transform lifted to G, ``<f, pi(g) phi>``, by direct quadrature (x1 on grid)."""
    _check_pair(f, phi)
    return f.inner(apply_pi(g, phi, p))


def cst_closed_form(q: float, E: float, x1, x2, x3, p: ModelParams):
    """Transform of the squeezed state ``phi_q`` by the fiducial ``phi_E`` (dimensionless normalisation)."""
    x1, x2, x3 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x1, x2, x3)))
    den = 1j * x2 + E + q
    expo = (-np.pi * p.hbar4 * E * x1 ** 2 - TWO_PI_I * p.h2 * x2
            - np.pi * p.hbar4 * (x3 - 1j * E * x1) ** 2 / den)
    return np.sqrt(2.0) * (q * E) ** 0.25 * np.exp(expo) / np.sqrt(den)


def closed_form_slice(q: float, E: float, grid1: UniformGrid, grid3: UniformGrid,
                      x2: float, p: ModelParams) -> PhaseSlice:
    x1, x3 = np.meshgrid(grid1.points, grid3.points, indexing="ij")
    return PhaseSlice(grid1, grid3, float(x2), cst_closed_form(q, E, x1, x2, x3, p))


def closed_form_volume(q: float, E: float, grid1: UniformGrid, grid3: UniformGrid,
                       x2s, p: ModelParams) -> PhaseVolume:
    return PhaseVolume.from_slices(closed_form_slice(q, E, grid1, grid3, x2, p)
                                   for x2 in np.atleast_1d(x2s))


def inner_product_x2(u: PhaseSlice, v: PhaseSlice, p: ModelParams) -> complex:
    if not (u.grid1.same_as(v.grid1) and u.grid3.same_as(v.grid3)) or not np.isclose(u.x2, v.x2):
        raise GridMismatch("slices must share grids and x2")
    return complex(np.sum(u.values * np.conj(v.values))
                   * p.hbar4 * u.grid1.step * u.grid3.step)


def norm_x2(u: PhaseSlice, p: ModelParams) -> float:
    return float(np.sqrt(inner_product_x2(u, u, p).real))


def reconstruct(F: PhaseSlice, phi: SampledLine, p: ModelParams) -> SampledLine:
    """Adjoint transform ``M_phi(x2)``; ``reconstruct(cst_slice(f, phi)) = <phi, phi> f``."""
    grid = phi.grid
    dual, a, b, c = _dft_factors(grid, p)
    if not (F.grid1.same_as(grid) and F.grid3.same_as(dual)):
        raise GridMismatch("slice grids are not the (y, dual y) pair of the fiducial")
    y = grid.points
    H = np.conj(c) * np.conj(a)[None, :] * np.fft.fft(F.values * np.conj(b)[None, :], axis=1)
    # S[k, i] = conj(phi(y_i - x1_k)), so conj(S) is the shifted fiducial itself
    shifted = np.conj(_shifted_conj_fiducial(phi))
    out = np.sum(H * shifted, axis=0)
    out *= (np.exp(TWO_PI_I * p.h2 * F.x2 + 1j * np.pi * p.hbar4 * F.x2 * y ** 2)
            * p.hbar4 * F.grid1.step * F.grid3.step)
    return SampledLine(grid, out, phi.weight)
