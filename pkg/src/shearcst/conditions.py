"""Analyticity and structural conditions characterising the transform's image space.

Every image of a Gaussian fiducial ``exp(-pi hbar4 E y^2)`` is annihilated by

    C = -i d1 + E d3 - 2 pi i hbar4 E x1            (analyticity)
    S = d33 + 4 pi i hbar4 d2 - 8 pi^2 h2 hbar4      (structural, any fiducial)

Residual norms skip a border frame (10% of each in-plane axis) and, for
operators that differentiate in x2, the two slices at each end where only
one-sided stencils are available.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import grids
from .grids import ModelParams, PhaseSlice, PhaseVolume
from .group import X1, X3
from .representations import _volume, casimir_action, lie_derivative


@dataclass(frozen=True)
class ConditionResidual:
    absolute: float
    relative: float
    operator: str


def apply_C(F, E: float, p: ModelParams):
    if not E > 0:
        raise ValueError("E must be positive")
    V, unwrap = _volume(F)
    x1, _, _ = V.mesh()
    out = -1j * grids.d1(V) + E * grids.d3(V) - 2j * np.pi * p.hbar4 * E * x1 * V.values
    return unwrap(V.with_values(out))


def apply_C_lie(F, E: float, p: ModelParams):
    """The same operator composed as ``-i L(X1) + E L(X3)``."""
    a = lie_derivative(X1, F, p)
    b = lie_derivative(X3, F, p)
    return F.with_values(-1j * a.values + E * b.values)


def apply_S(F: PhaseVolume, p: ModelParams) -> PhaseVolume:
    out = (grids.d3(F, order=2) + 4j * np.pi * p.hbar4 * grids.d2(F)
           - 8 * np.pi ** 2 * p.h2 * p.hbar4 * F.values)
    return F.with_values(out)


def apply_S_casimir(F: PhaseVolume, p: ModelParams) -> PhaseVolume:
    """``S`` composed from Lie-derivative stencils: Casimir word minus its scalar value."""
    G = casimir_action(lie_derivative, F, p)
    return F.with_values(G.values - 8 * np.pi ** 2 * p.h2 * p.hbar4 * F.values)


def cauchy_riemann(F, E: float, p: ModelParams, method: str = "spectral"):
    """``(-i d1 + E d3)``, i.e. ``2E d/dzbar`` for ``z = x3 - i E x1``.

    Peeled slices grow like ``exp(c x1^2)`` and are not periodic, so plain
    spectral differentiation does not apply to them. ``method="product"``
    writes ``B = exp(pi hbar4 E x1^2) G`` with ``G = unpeel(B)`` decaying,
    differentiates ``G`` spectrally and the Gaussian exactly.
    ``method="fd8"`` uses local eighth-order differences (NaN in a 4-sample
    border) and needs no structure at all.
    """
    V, unwrap = _volume(F)
    if method == "product":
        x1, _, _ = V.mesh()
        gauss = np.exp(np.pi * p.hbar4 * E * x1 ** 2)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            G = V.with_values(V.values / gauss)
            out = gauss * (-1j * grids.d1(G) + E * grids.d3(G)
                           - 2j * np.pi * p.hbar4 * E * x1 * G.values)
    elif method == "fd8":
        out = (-1j * grids.fd8_diff(V.values, V.grid1.step, axis=1)
               + E * grids.fd8_diff(V.values, V.grid3.step, axis=2))
    elif method == "spectral":
        out = -1j * grids.d1(V) + E * grids.d3(V)
    else:
        raise ValueError(f"unknown method {method!r}")
    return unwrap(V.with_values(out))


def peel(F, E: float, p: ModelParams):
    """Multiply by ``exp(+pi hbar4 E x1^2)``, turning ``C`` into a Cauchy-Riemann operator."""
    V, unwrap = _volume(F)
    x1, _, _ = V.mesh()
    factor = np.exp(np.pi * p.hbar4 * E * x1 ** 2)
    with np.errstate(over="ignore", invalid="ignore"):
        out = V.values * factor
    if not np.all(np.isfinite(out)):
        warnings.warn("peel overflowed at the domain edge; non-finite samples set to 0",
                      RuntimeWarning, stacklevel=2)
        out = np.where(np.isfinite(out), out, 0.0)
    return unwrap(V.with_values(out))


def unpeel(F, E: float, p: ModelParams):
    V, unwrap = _volume(F)
    x1, _, _ = V.mesh()
    return unwrap(V.with_values(V.values * np.exp(-np.pi * p.hbar4 * E * x1 ** 2)))


def residual_region(V: PhaseVolume, frame: float = 0.1, uses_x2: bool = False) -> np.ndarray:
    mask = grids.interior_mask(V.grid1.count, V.grid3.count, frame)
    keep = np.ones(V.x2.size, dtype=bool)
    if uses_x2 and V.x2.size > 5:
        keep[:2] = keep[-2:] = False
    return keep[:, None, None] & mask[None]


def residual(result, reference, operator: str, p: ModelParams, frame: float = 0.1,
             uses_x2: bool = False, weight: np.ndarray | None = None) -> ConditionResidual:
    """Norm of ``result`` relative to ``reference`` over the interior region.

    ``weight`` (broadcastable to the volume) multiplies both before the norms.
    """
    R, _ = _volume(result)
    F, _ = _volume(reference)
    region = residual_region(F, frame, uses_x2)
    w = p.hbar4 * F.grid1.step * F.grid3.step
    r, f = R.values, F.values
    if weight is not None:
        r, f = r * weight, f * weight
    a = float(np.sqrt(np.sum(np.abs(r[region]) ** 2) * w))
    ref = float(np.sqrt(np.sum(np.abs(f[region]) ** 2) * w))
    return ConditionResidual(a, a / ref if ref > 0 else float("inf"), operator)


def residual_C(F, E: float, p: ModelParams, frame: float = 0.1) -> ConditionResidual:
    return residual(apply_C(F, E, p), F, "C", p, frame)


def residual_S(F: PhaseVolume, p: ModelParams, frame: float = 0.1) -> ConditionResidual:
    return residual(apply_S(F, p), F, "S", p, frame, uses_x2=True)


def residual_CR(B, E: float, p: ModelParams, frame: float = 0.1,
                method: str = "spectral", weighted: bool = False) -> ConditionResidual:
    """Cauchy-Riemann residual of a peeled slice.

    ``weighted=True`` measures in the norm with weight ``exp(-pi hbar4 E x1^2)``,
    the natural norm of the peeled space. Unweighted, the rim of the frame
    dominates: there the unpeeled data sit at the rounding floor and the peel
    factor amplifies that floor.
    """
    wt = None
    if weighted:
        V, _ = _volume(B)
        wt = np.exp(-np.pi * p.hbar4 * E * V.mesh()[0] ** 2)
    return residual(cauchy_riemann(B, E, p, method), B, "CR", p, frame, weight=wt)


def fit_holomorphic_polynomial(B: PhaseSlice, E: float, degree: int, frame: float = 0.1):
    """Least-squares fit of a peeled slice by ``sum_n c_n z^n`` with ``z = x3 - i E x1``.

    Returns ``(coefficients, relative_misfit)`` over the interior region.
    """
    x1, x3 = B.mesh()
    z = x3 - 1j * E * x1
    mask = grids.interior_mask(B.grid1.count, B.grid3.count, frame)
    A = np.stack([z[mask] ** n for n in range(degree + 1)], axis=1)
    b = B.values[mask]
    coeffs, *_ = np.linalg.lstsq(A, b, rcond=None)
    misfit = np.linalg.norm(A @ coeffs - b) / np.linalg.norm(b)
    return coeffs, float(misfit)
