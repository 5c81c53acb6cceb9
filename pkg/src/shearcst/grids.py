"""Physical constants, uniform grids, sampled functions and differentiation stencils.

Axes ``x1`` and ``x3`` (and the 1-D ``y`` axis) are differentiated spectrally,
treating the sampled data as one period of a periodic function. The shear
axis ``x2`` carries few slices and is differentiated with fourth-order
finite differences.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryMassWarning, GridMismatch, InsufficientSlices

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Planck-type constant ``hbar4``, character ``h2``, mass ``m`` and frequency ``omega``."""

    hbar4: float = 1.0
    h2: float = 0.5
    m: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not self.hbar4 > 0:
            raise ValueError("hbar4 must be positive")
        if not (self.m > 0 and self.omega > 0):
            raise ValueError("m and omega must be positive")

    @property
    def m_omega(self) -> float:
        return self.m * self.omega

    @property
    def heat_rate(self) -> float:
        """Diffusion constant ``1 / (8 pi hbar4 m omega)`` of the f2 heat equation."""
        return 1.0 / (8.0 * np.pi * self.hbar4 * self.m_omega)


@dataclass(frozen=True)
class UniformGrid:
    origin: float
    step: float
    count: int

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("grid step must be positive")
        if self.count < 2:
            raise ValueError("grid needs at least two points")

    @classmethod
    def centered(cls, count: int, step: float) -> "UniformGrid":
        """Grid with ``count // 2`` points left of the origin and the origin on-grid."""
        return cls(-(count // 2) * step, step, count)

    @classmethod
    def spanning(cls, half_width: float, count: int) -> "UniformGrid":
        return cls.centered(count, 2.0 * half_width / count)

    @property
    def points(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.count)

    @property
    def zero_index(self) -> int:
        k = -self.origin / self.step
        if abs(k - round(k)) > 1e-9 or not 0 <= round(k) < self.count:
            raise GridMismatch(f"grid {self} does not contain the origin")
        return int(round(k))

    def dual(self, hbar4: float) -> "UniformGrid":
        """Reciprocal grid of the hbar4-scaled DFT, ``step = 1 / (hbar4 N step)``."""
        return UniformGrid.centered(self.count, 1.0 / (hbar4 * self.count * self.step))

    def same_as(self, other: "UniformGrid") -> bool:
        return (self.count == other.count
                and np.isclose(self.step, other.step, rtol=1e-12, atol=0)
                and np.isclose(self.origin, other.origin, rtol=1e-12, atol=1e-14))


MEASURES = ("lebesgue", "dimensionless")


def measure_weight(measure: str, p: ModelParams) -> float:
    """Density of the line measure: 1, or ``sqrt(hbar4/h2)`` for the dimensionless one."""
    if measure == "lebesgue":
        return 1.0
    if measure == "dimensionless":
        if not p.h2 > 0:
            raise ValueError("dimensionless measure needs h2 > 0")
        return float(np.sqrt(p.hbar4 / p.h2))
    raise ValueError(f"unknown measure {measure!r}")


@dataclass
class SampledLine:
    """A state on the real line sampled on a uniform grid.

    ``weight`` is the density of the measure against ``dy``; inner products
    and the coherent state transform integrate with it.
    """

    grid: UniformGrid
    values: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.count,):
            raise GridMismatch("values do not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite samples")

    @property
    def y(self) -> np.ndarray:
        return self.grid.points

    def inner(self, other: "SampledLine") -> complex:
        _check_lines(self, other)
        return complex(np.sum(self.values * np.conj(other.values)) * self.grid.step * self.weight)

    def norm(self) -> float:
        return float(np.sqrt(self.inner(self).real))

    def with_values(self, values) -> "SampledLine":
        return SampledLine(self.grid, values, self.weight)


def _check_lines(a: SampledLine, b: SampledLine):
    if not a.grid.same_as(b.grid):
        raise GridMismatch("lines live on different grids")
    if not np.isclose(a.weight, b.weight):
        raise GridMismatch("lines carry different measures")


@dataclass
class PhaseSlice:
    """Function of ``(x1, x3)`` at a fixed shear ``x2``; ``values[i1, i3]``."""

    grid1: UniformGrid
    grid3: UniformGrid
    x2: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid1.count, self.grid3.count):
            raise GridMismatch("slice values do not match the grids")

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.grid1.points, self.grid3.points, indexing="ij")

    def with_values(self, values) -> "PhaseSlice":
        return PhaseSlice(self.grid1, self.grid3, self.x2, values)

    def as_volume(self) -> "PhaseVolume":
        return PhaseVolume(self.grid1, self.grid3, np.array([self.x2]), self.values[None])


@dataclass
class PhaseVolume:
    """Ordered family of slices over a uniform x2 grid; ``values[i2, i1, i3]``."""

    grid1: UniformGrid
    grid3: UniformGrid
    x2: np.ndarray
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.x2 = np.atleast_1d(np.asarray(self.x2, dtype=float))
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.x2.size, self.grid1.count, self.grid3.count):
            raise GridMismatch("volume values do not match the grids")
        if self.x2.size > 1:
            d = np.diff(self.x2)
            if np.any(d <= 0) or not np.allclose(d, d[0], rtol=1e-9, atol=1e-14):
                raise GridMismatch("x2 samples must be strictly increasing and uniform")

    @classmethod
    def from_slices(cls, slices) -> "PhaseVolume":
        slices = list(slices)
        g1, g3 = slices[0].grid1, slices[0].grid3
        for s in slices[1:]:
            if not (s.grid1.same_as(g1) and s.grid3.same_as(g3)):
                raise GridMismatch("slices do not share their grids")
        return cls(g1, g3, np.array([s.x2 for s in slices]),
                   np.stack([s.values for s in slices]))

    @property
    def dx2(self) -> float:
        if self.x2.size < 2:
            raise InsufficientSlices("single-slice volume has no x2 step")
        return float(self.x2[1] - self.x2[0])

    @property
    def slices(self) -> list[PhaseSlice]:
        return [PhaseSlice(self.grid1, self.grid3, float(x), v) for x, v in zip(self.x2, self.values)]

    def slice(self, k: int) -> PhaseSlice:
        return PhaseSlice(self.grid1, self.grid3, float(self.x2[k]), self.values[k])

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable coordinate arrays ``(x1, x2, x3)``."""
        x1 = self.grid1.points[None, :, None]
        x2 = self.x2[:, None, None]
        x3 = self.grid3.points[None, None, :]
        return x1, x2, x3

    def with_values(self, values) -> "PhaseVolume":
        return PhaseVolume(self.grid1, self.grid3, self.x2, values)

    def same_grids(self, other: "PhaseVolume") -> bool:
        return (self.grid1.same_as(other.grid1) and self.grid3.same_as(other.grid3)
                and self.x2.shape == other.x2.shape and np.allclose(self.x2, other.x2))


def volume_grid(grid1: UniformGrid, grid3: UniformGrid, x2) -> PhaseVolume:
    """Zero-valued volume used as a coordinate carrier."""
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    return PhaseVolume(grid1, grid3, x2, np.zeros((x2.size, grid1.count, grid3.count)))


def x2_stencil_grid(center: float, step: float = 1.0 / 512, half: int = 2) -> np.ndarray:
    return center + step * np.arange(-half, half + 1)


# --- differentiation ---------------------------------------------------------

def _wavenumbers(n: int, step: float) -> np.ndarray:
    k = 2j * np.pi * np.fft.fftfreq(n, d=step)
    if n % 2 == 0:
        k[n // 2] = 0.0  # odd derivatives drop the unpaired Nyquist mode
    return k


def spectral_diff(values: np.ndarray, step: float, axis: int = -1, order: int = 1) -> np.ndarray:
    """Derivative along ``axis`` by DFT; order ``n`` applies the first derivative n times."""
    values = np.asarray(values, dtype=complex)
    n = values.shape[axis]
    k = _wavenumbers(n, step) ** order
    shape = [1] * values.ndim
    shape[axis] = n
    return np.fft.ifft(np.fft.fft(values, axis=axis) * k.reshape(shape), axis=axis)


# fourth-order first-derivative weights: central, and one-sided for the two edge points
_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def fd4_diff(values: np.ndarray, step: float, axis: int = 0) -> np.ndarray:
    """Fourth-order finite-difference first derivative; needs at least five samples."""
    v = np.moveaxis(np.asarray(values, dtype=complex), axis, 0)
    n = v.shape[0]
    if n < 5:
        raise InsufficientSlices(f"x2 stencil needs 5 slices, got {n}")
    out = np.empty_like(v)
    out[2:-2] = (_CENTRAL[0] * v[:-4] + _CENTRAL[1] * v[1:-3]
                 + _CENTRAL[3] * v[3:-1] + _CENTRAL[4] * v[4:])
    out[0] = np.tensordot(_EDGE0, v[:5], axes=1)
    out[1] = np.tensordot(_EDGE1, v[:5], axes=1)
    out[-1] = -np.tensordot(_EDGE0, v[-1:-6:-1], axes=1)
    out[-2] = -np.tensordot(_EDGE1, v[-1:-6:-1], axes=1)
    return np.moveaxis(out / step, 0, axis)


_CENTRAL8 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])


def fd8_diff(values: np.ndarray, step: float, axis: int = -1) -> np.ndarray:
    """Eighth-order central first derivative; the four samples at each end are set to NaN.

    Local, so it suits growing non-periodic functions such as peeled slices.
    """
    v = np.moveaxis(np.asarray(values, dtype=complex), axis, 0)
    n = v.shape[0]
    out = np.full_like(v, np.nan)
    if n > 8:
        out[4:-4] = sum(w * v[k:n - 8 + k] for k, w in enumerate(_CENTRAL8) if w)
    return np.moveaxis(out / step, 0, axis)


def d1(F: PhaseVolume, order: int = 1) -> np.ndarray:
    return spectral_diff(F.values, F.grid1.step, axis=1, order=order)


def d3(F: PhaseVolume, order: int = 1) -> np.ndarray:
    return spectral_diff(F.values, F.grid3.step, axis=2, order=order)


def d2(F: PhaseVolume) -> np.ndarray:
    if F.x2.size < 5:
        raise InsufficientSlices(f"x2 derivative needs at least 5 slices, got {F.x2.size}")
    return fd4_diff(F.values, F.dx2, axis=0)


def boundary_mass(values: np.ndarray) -> float:
    """Largest boundary sample relative to the peak, over all axes of ``values``."""
    a = np.abs(np.asarray(values))
    peak = a.max()
    if peak == 0:
        return 0.0
    edge = 0.0
    for ax in range(a.ndim):
        if a.shape[ax] < 2:
            continue
        edge = max(edge, np.take(a, 0, axis=ax).max(), np.take(a, -1, axis=ax).max())
    return float(edge / peak)


def check_boundary(values: np.ndarray, what: str = "samples", tol: float = BOUNDARY_TOL) -> float:
    ratio = boundary_mass(values)
    if ratio > tol:
        warnings.warn(f"{what}: boundary/peak ratio {ratio:.2e} exceeds {tol:.0e}",
                      BoundaryMassWarning, stacklevel=2)
    return ratio


def interior_mask(shape1: int, shape3: int, frame: float = 0.1) -> np.ndarray:
    """Boolean (x1, x3) mask dropping a ``frame``-fraction border on each side."""
    b1 = int(np.ceil(frame * shape1))
    b3 = int(np.ceil(frame * shape3))
    m = np.zeros((shape1, shape3), dtype=bool)
    m[b1:shape1 - b1, b3:shape3 - b3] = True
    return m
