"""Actions of the irreducible and induced representations and their derived operators.

``pi`` is the irreducible representation on L2(R) indexed by ``(h2, hbar4)``;
``pi_tilde`` is the representation on functions over G/Z induced from the
central character. Group actions are restricted to grid-exact shifts so that
the checks built on them are free of interpolation error.
"""
from __future__ import annotations

import numpy as np

from . import grids
from .errors import OffGridShift
from .grids import ModelParams, PhaseSlice, PhaseVolume, SampledLine
from .group import AlgebraVector, GroupElement, casimir_coefficients, BASIS

TWO_PI_I = 2j * np.pi


def grid_shift(values: np.ndarray, shift: int, axis: int) -> np.ndarray:
    """``out[i] = values[i - shift]`` along ``axis``, zero-filled (no wrap-around)."""
    out = np.zeros_like(values)
    n = values.shape[axis]
    if abs(shift) >= n:
        return out
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    if shift >= 0:
        src[axis], dst[axis] = slice(0, n - shift), slice(shift, n)
    else:
        src[axis], dst[axis] = slice(-shift, n), slice(0, n + shift)
    out[tuple(dst)] = values[tuple(src)]
    return out


def steps_of(amount: float, step: float, what: str = "shift") -> int:
    k = amount / step
    if abs(k - round(k)) > 1e-9:
        raise OffGridShift(f"{what} {amount} is not a multiple of the grid step {step}")
    return int(round(k))


def _volume(F):
    """Return ``(volume, unwrap)`` so slice inputs come back as slices."""
    if isinstance(F, PhaseSlice):
        return F.as_volume(), lambda V: V.slice(0)
    return F, lambda V: V


# --- irreducible representation on L2(R) --------------------------------------

def apply_pi(g: GroupElement, f: SampledLine, p: ModelParams) -> SampledLine:
    y = f.y
    s = steps_of(g.x1, f.grid.step, "x1")
    phase = np.exp(TWO_PI_I * (p.h2 * g.x2 + p.hbar4 * (g.x4 - g.x3 * y + 0.5 * g.x2 * y ** 2)))
    return f.with_values(phase * grid_shift(f.values, s, 0))


def derived_pi(X: AlgebraVector, f: SampledLine, p: ModelParams) -> SampledLine:
    """``d pi(X) f`` with ``d/dy`` taken spectrally."""
    c1, c2, c3, c4 = X
    y = f.y
    v = f.values
    out = np.zeros_like(v)
    if c1:
        out -= c1 * grids.spectral_diff(v, f.grid.step)
    if c2:
        out += c2 * (TWO_PI_I * p.h2 + 1j * np.pi * p.hbar4 * y ** 2) * v
    if c3:
        out += c3 * (-TWO_PI_I * p.hbar4 * y) * v
    if c4:
        out += c4 * TWO_PI_I * p.hbar4 * v
    return f.with_values(out)


# --- induced representation on G/Z --------------------------------------------

def apply_pi_tilde(g: GroupElement, F, p: ModelParams):
    """Left action on a volume (or slice); all induced shifts must land on grid points."""
    V, unwrap = _volume(F)
    y1, y2, y3, y4 = g.x1, g.x2, g.x3, g.x4
    s1 = steps_of(y1, V.grid1.step, "x1")
    if V.x2.size > 1:
        s2 = steps_of(y2, V.dx2, "x2")
    elif y2 != 0:
        raise OffGridShift("x2 shift on a single-slice volume")
    else:
        s2 = 0
    x3 = V.grid3.points
    out = np.zeros_like(V.values)
    for k, x2p in enumerate(V.x2):
        src = k - s2
        if not 0 <= src < V.x2.size:
            continue
        s3 = steps_of(y3 + y1 * x2p - y1 * y2, V.grid3.step, "x3")
        shifted = grid_shift(grid_shift(V.values[src], s1, 0), s3, 1)
        phase = np.exp(TWO_PI_I * p.hbar4 * (y4 - y1 * y3 + 0.5 * y1 ** 2 * y2
                                             + y1 * x3 - 0.5 * y1 ** 2 * x2p))
        out[k] = phase[None, :] * shifted
    return unwrap(V.with_values(out))


def derived_pi_tilde(X: AlgebraVector, F, p: ModelParams):
    """``d pi_tilde(X)``: spectral in x1, x3; fourth-order across slices in x2."""
    V, unwrap = _volume(F)
    c1, c2, c3, c4 = X
    x1, x2, x3 = V.mesh()
    v = V.values
    out = np.zeros_like(v)
    if c1 or c3:
        dv3 = grids.d3(V)
    if c1:
        out += c1 * (-grids.d1(V) - x2 * dv3 + TWO_PI_I * p.hbar4 * x3 * v)
    if c2:
        out -= c2 * grids.d2(V)
    if c3:
        out -= c3 * dv3
    if c4:
        out += c4 * TWO_PI_I * p.hbar4 * v
    return unwrap(V.with_values(out))


def lie_derivative(X: AlgebraVector, F, p: ModelParams):
    """Left-invariant vector field of ``X`` acting on lifted functions of G/Z."""
    V, unwrap = _volume(F)
    c1, c2, c3, c4 = X
    x1, x2, x3 = V.mesh()
    v = V.values
    out = np.zeros_like(v)
    if c2 or c3:
        dv3 = grids.d3(V)
    if c1:
        out += c1 * grids.d1(V)
    if c2:
        out += c2 * (grids.d2(V) + x1 * dv3 - 1j * np.pi * p.hbar4 * x1 ** 2 * v)
    if c3:
        out += c3 * (dv3 - TWO_PI_I * p.hbar4 * x1 * v)
    if c4:
        out -= c4 * TWO_PI_I * p.hbar4 * v
    return unwrap(V.with_values(out))


_NAMED = dict(zip(("X1", "X2", "X3", "X4"), BASIS))


def casimir_action(operator, F, p: ModelParams):
    """Apply the Casimir word by word through ``operator`` (one of the three families).

    Monomials are applied right-to-left, as operator products.
    """
    total = None
    for word, coeff in casimir_coefficients().items():
        G = F
        for name in reversed(word):
            G = operator(_NAMED[name], G, p)
        total = coeff * G.values if total is None else total + coeff * G.values
    return F.with_values(total)


def commutator(operator, X: AlgebraVector, Y: AlgebraVector, F, p: ModelParams):
    """``[op(X), op(Y)] F`` evaluated by composition."""
    a = operator(X, operator(Y, F, p), p)
    b = operator(Y, operator(X, F, p), p)
    return F.with_values(a.values - b.values)
