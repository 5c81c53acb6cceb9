"""Harmonic oscillator on the image spaces: Hamiltonians, order reduction, closed-form flows.

The G-case flow is

    f(t) = sqrt(E + m w) / sqrt(i x2 + E + m w)
           * exp(-i w t / 2 - pi hbar4 E x1^2 - 2 pi i h2 x2 - pi hbar4 (x3 - i E x1)^2 / (i x2 + E + m w))
           * f2(exp(-i w t) z, exp(-2 i w t) u),

    z = (x3 - i E x1) / (i x2 + E + m w),   u = (m w - (i x2 + E)) / (m w + (i x2 + E)),

where ``f2`` solves ``d_u f2 = -kappa d_zz f2`` with ``kappa = 1 / (8 pi hbar4 m w)``.
Seeds supply ``f2`` together with the radius ``R`` of the disc in ``u`` where it
is analytic; the flow is defined for all ``t`` only if ``|u| < R`` on every slice.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import grids
from .errors import CenterPoint, KernelDivergent, SqueezeOutOfRange
from .grids import ModelParams, PhaseSlice, PhaseVolume, SampledLine, UniformGrid
from .representations import _volume


# --- Hamiltonians -------------------------------------------------------------

def hamiltonian_heisenberg(F, p: ModelParams):
    """Quantised oscillator on the Heisenberg image space (slices taken at x2 = 0)."""
    V, unwrap = _volume(F)
    x1, _, x3 = V.mesh()
    h, m, w = p.hbar4, p.m, p.omega
    out = (-grids.d1(V, 2) / (4 * np.pi * m) - m * w ** 2 / (4 * np.pi) * grids.d3(V, 2)
           + 1j * h / m * x3 * grids.d1(V) + np.pi * h ** 2 / m * x3 ** 2 * V.values)
    return unwrap(V.with_values(out))


def hamiltonian_heisenberg_reduced(F, p: ModelParams):
    """First-order operator agreeing with the Heisenberg Hamiltonian on analytic images."""
    V, unwrap = _volume(F)
    x1, _, x3 = V.mesh()
    h, m, w = p.hbar4, p.m, p.omega
    out = (1j * h / m * x3 * grids.d1(V) - 1j * h * m * w ** 2 * x1 * grids.d3(V)
           + (0.5 * h * w + np.pi * h ** 2 / m * (x3 ** 2 - (m * w * x1) ** 2)) * V.values)
    return unwrap(V.with_values(out))


def hamiltonian_G(F, p: ModelParams):
    """Weyl-quantised oscillator ``-(dX1^2)/(4 pi m) - (m w^2 / 4 pi) dX3^2``, expanded.

    No x2-derivative occurs, so slices are processed independently.
    """
    V, unwrap = _volume(F)
    x1, x2, x3 = V.mesh()
    h, m, w = p.hbar4, p.m, p.omega
    v = V.values
    dv3 = grids.d3(V)
    out = (-grids.d1(V, 2) / (4 * np.pi * m)
           - x2 / (2 * np.pi * m) * grids.spectral_diff(dv3, V.grid1.step, axis=1)
           - (x2 ** 2 / (4 * np.pi * m) + m * w ** 2 / (4 * np.pi)) * grids.d3(V, 2)
           + 1j * h / m * x3 * grids.d1(V)
           + 1j * h / m * x2 * x3 * dv3
           + (0.5j * h * x2 / m + np.pi * h ** 2 / m * x3 ** 2) * v)
    return unwrap(V.with_values(out))


def h1_zeroth_order(x1, x2, x3, E: float, p: ModelParams):
    h, h2, m, w = p.hbar4, p.h2, p.m, p.omega
    pi = np.pi
    return -h / (2 * m) * (-8j * pi * h2 * E * x2 - 1j * x2 + 4 * pi * h2 * x2 ** 2
                           - 2 * pi * h * x3 ** 2 + 4 * pi * h2 * (m * w) ** 2 - E
                           - 4 * pi * h2 * E ** 2 - 4j * pi * E * h * x1 ** 2 * x2
                           + 2 * pi * h * E ** 2 * x1 ** 2)


def h1_first_order(x1, x2, x3, E: float, p: ModelParams):
    """Coefficients of ``(d1, d2, d3)`` in the reduced operator."""
    c = 1j * p.hbar4 / p.m
    return (c * (x3 + x1 * x2),
            -c * ((1j * x2 + E) ** 2 - p.m_omega ** 2) + 0 * x1,
            -c * (E ** 2 * x1 - x2 * x3))


def reduced_H1(F: PhaseVolume, E: float, p: ModelParams) -> PhaseVolume:
    """First-order operator equal to ``hamiltonian_G`` wherever ``C F = S F = 0``."""
    x1, x2, x3 = F.mesh()
    a1, a2, a3 = h1_first_order(x1, x2, x3, E, p)
    out = (a1 * grids.d1(F) + a2 * grids.d2(F) + a3 * grids.d3(F)
           + h1_zeroth_order(x1, x2, x3, E, p) * F.values)
    return F.with_values(out)


@dataclass(frozen=True)
class ReductionCoefficients:
    """Multipliers of the order-reducing correction, as sympy expressions in ``x1, x2``.

    G case: ``H + (A d1 + B d2 + C d3 + K) C_op + F S_op``.
    Heisenberg case (E = m w): ``H + (A d1 + i B d3 + C) D_op`` with ``K = F = 0``.
    """

    A: object
    B: object
    C: object
    K: object
    F: object
    case: str


def reduction_coefficients(E: float, p: ModelParams, case: str = "G") -> ReductionCoefficients:
    import sympy as sp
    x1, x2 = sp.symbols("x1 x2", real=True)
    I, pi = sp.I, sp.pi
    h, m, w = sp.Float(p.hbar4), sp.Float(p.m), sp.Float(p.omega)
    E = sp.Float(E)
    if case == "heisenberg":
        return ReductionCoefficients(I / (4 * pi * m), -I * w / (4 * pi),
                                     -I * h * w * x1 / 2, sp.Integer(0), sp.Integer(0), case)
    return ReductionCoefficients(
        I / (4 * pi * m), sp.Integer(0), I / (2 * pi * m) * (-I * E / 2 + x2),
        I * h / (2 * m) * x1 * (-E + 2 * I * x2),
        -(I * x2 + E) ** 2 / (4 * pi * m) + m * w ** 2 / (4 * pi), case)


def audit_reduction(E: float, p: ModelParams, case: str = "G", samples: int = 16,
                    seed: int = 0) -> dict[str, float]:
    """Expand the corrected Hamiltonian symbolically and compare with the closed first-order form.

    Returns the largest scaled mismatch of every derivative coefficient (second-
    order ones must vanish) over random sample points.
    """
    import sympy as sp
    x1, x2, x3 = sp.symbols("x1 x2 x3", real=True)
    I, pi = sp.I, sp.pi
    h, h2, m, w = (sp.Float(v) for v in (p.hbar4, p.h2, p.m, p.omega))
    Ef = sp.Float(E)
    coeffs = reduction_coefficients(E if case == "G" else p.m_omega, p, case)
    f = sp.Function("f")(x1, x2, x3)
    D = sp.diff
    if case == "heisenberg":
        Ef = m * w
        H = (-D(f, x1, 2) / (4 * pi * m) - m * w ** 2 / (4 * pi) * D(f, x3, 2)
             + I * h / m * x3 * D(f, x1) + pi * h ** 2 / m * x3 ** 2 * f)
        Cop = lambda g: -I * D(g, x1) + Ef * D(g, x3) - 2 * pi * I * h * Ef * x1 * g
        total = H + coeffs.A * D(Cop(f), x1) + I * coeffs.B * D(Cop(f), x3) + coeffs.C * Cop(f)
        target = {D(f, x1): I * h / m * x3, D(f, x3): -I * h * m * w ** 2 * x1,
                  D(f, x2): sp.Integer(0),
                  f: h * w / 2 + pi * h ** 2 / m * (x3 ** 2 - m ** 2 * w ** 2 * x1 ** 2)}
    else:
        def dX1(g):
            return -D(g, x1) - x2 * D(g, x3) + 2 * pi * I * h * x3 * g
        H = -dX1(dX1(f)) / (4 * pi * m) - m * w ** 2 / (4 * pi) * D(f, x3, 2)
        Cop = lambda g: -I * D(g, x1) + Ef * D(g, x3) - 2 * pi * I * h * Ef * x1 * g
        Sop = lambda g: D(g, x3, 2) + 4 * pi * I * h * D(g, x2) - 8 * pi ** 2 * h2 * h * g
        total = (H + coeffs.A * D(Cop(f), x1) + coeffs.B * D(Cop(f), x2)
                 + coeffs.C * D(Cop(f), x3) + coeffs.K * Cop(f) + coeffs.F * Sop(f))
        c = I * h / m
        target = {D(f, x1): c * (x3 + x1 * x2),
                  D(f, x2): -c * ((I * x2 + Ef) ** 2 - m ** 2 * w ** 2),
                  D(f, x3): -c * (Ef ** 2 * x1 - x2 * x3),
                  f: -h / (2 * m) * (-8 * I * pi * h2 * Ef * x2 - I * x2 + 4 * pi * h2 * x2 ** 2
                                     - 2 * pi * h * x3 ** 2 + 4 * pi * h2 * m ** 2 * w ** 2 - Ef
                                     - 4 * pi * h2 * Ef ** 2 - 4 * I * pi * Ef * h * x1 ** 2 * x2
                                     + 2 * pi * h * Ef ** 2 * x1 ** 2)}
    total = sp.expand(total)
    second = [D(f, a, b) for a, b in ((x1, x1), (x2, x2), (x3, x3), (x1, x2), (x1, x3), (x2, x3))]
    found = {str(t): total.coeff(t) for t in second}
    for t in target:
        if t is not f:
            found[str(t)] = total.coeff(t)
    rest = total
    for t in list(second) + [t for t in target if t is not f]:
        rest = rest - total.coeff(t) * t
    found["I"] = sp.expand(rest / f)
    expected = {str(t): v for t, v in target.items() if t is not f}
    expected["I"] = target[f]
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.5, 1.5, size=(samples, 3))
    report = {}
    for key, expr in found.items():
        ref = expected.get(key, sp.Integer(0))
        fe = sp.lambdify((x1, x2, x3), expr, "numpy")
        fr = sp.lambdify((x1, x2, x3), ref, "numpy")
        worst = 0.0
        for a, b, c3 in pts:
            got, want = complex(fe(a, b, c3)), complex(fr(a, b, c3))
            worst = max(worst, abs(got - want) / max(1.0, abs(want)))
        report[key] = worst
    return report


# --- f2 seeds ------------------------------------------------------------------

class HeatSeed:
    """Analytic profile ``f2(z, u)`` solving the f2 heat equation; ``radius`` is its R."""

    radius: float = math.inf

    def __call__(self, z, u):
        raise NotImplementedError


class HeatPolynomialSeed(HeatSeed):
    """``sum_n c_n v_n(z, u)`` with heat polynomials ``v_n = sum_k n!/(k!(n-2k)!) z^(n-2k) (-kappa u)^k``."""

    def __init__(self, coeffs, p: ModelParams):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.kappa = p.heat_rate

    def __call__(self, z, u):
        z = np.asarray(z, dtype=complex)
        s = -self.kappa * np.asarray(u, dtype=complex)
        out = np.zeros(np.broadcast(z, s).shape, dtype=complex)
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            term = 0
            for k in range(n // 2 + 1):
                term = term + math.factorial(n) / (math.factorial(k) * math.factorial(n - 2 * k)) \
                    * z ** (n - 2 * k) * s ** k
            out = out + c * term
        return out


class GaussianSeed(HeatSeed):
    """Heat flow of ``exp(-alpha z^2)``: ``(1 - 4 kappa alpha u)^(-1/2) exp(-alpha z^2 / (1 - 4 kappa alpha u))``."""

    def __init__(self, alpha: float, p: ModelParams, amplitude: complex = 1.0):
        self.alpha = alpha
        self.amplitude = amplitude
        self.kappa = p.heat_rate
        self.radius = 1.0 / (4 * self.kappa * abs(alpha)) if alpha else math.inf

    def __call__(self, z, u):
        s = 1.0 - 4 * self.kappa * self.alpha * np.asarray(u, dtype=complex)
        return self.amplitude * np.exp(-self.alpha * np.asarray(z) ** 2 / s) / np.sqrt(s)


class SumSeed(HeatSeed):
    def __init__(self, *seeds: HeatSeed):
        self.seeds = seeds
        self.radius = min(s.radius for s in seeds)

    def __call__(self, z, u):
        return sum(s(z, u) for s in self.seeds)


class GridSeed(HeatSeed):
    """Gridded initial data ``g = f2(., 0)`` continued to complex ``u`` by the heat kernel.

    Only usable where the kernel integral is well conditioned; ``radius`` must
    be declared by the caller.
    """

    def __init__(self, g: SampledLine, p: ModelParams, radius: float):
        self.g = g
        self.p = p
        self.radius = radius

    def __call__(self, z, u):
        z = np.asarray(z, dtype=complex)
        u = complex(np.asarray(u).reshape(-1)[0]) if np.ndim(u) else complex(u)
        return heat_propagate(self.g, u, self.p, z=z.ravel()).reshape(z.shape)


def heisenberg_seed(seed: HeatSeed, p: ModelParams) -> Callable:
    """Profile of ``w = x3 - i m w x1`` reproducing ``seed`` on the unsqueezed slice."""
    return lambda w: seed(np.asarray(w) / (2 * p.m_omega), 0.0)


class PowerSeries:
    """``f2(w) = sum_n c_n w^n``."""

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=complex)

    def __call__(self, w):
        return np.polynomial.polynomial.polyval(np.asarray(w, dtype=complex), self.coeffs)


def heat_propagate(g: SampledLine, u: complex, p: ModelParams, z=None, chunk: int = 512):
    """``f2(z, u) = sqrt(-2 hbar4 m w / u) int g(xi) exp(2 pi hbar4 m w (z - xi)^2 / u) dxi``.

    Evaluated at ``z`` (default: the real grid of ``g``) by the trapezoidal rule.
    """
    u = complex(u)
    if u == 0:
        raise ValueError("u must be non-zero")
    b = 2 * np.pi * p.hbar4 * p.m_omega / u
    pref = np.sqrt(-2 * p.hbar4 * p.m_omega / u)
    xi = g.y
    z = xi.astype(complex) if z is None else np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(z.shape, dtype=complex)
    wts = np.full(xi.size, g.grid.step)
    wts[0] = wts[-1] = 0.5 * g.grid.step
    flat = z.ravel()
    res = np.empty(flat.shape, dtype=complex)
    for start in range(0, flat.size, chunk):
        zz = flat[start:start + chunk, None]
        with np.errstate(over="raise", invalid="raise"):
            try:
                integrand = g.values[None, :] * np.exp(b * (zz - xi[None, :]) ** 2)
            except FloatingPointError as exc:
                raise KernelDivergent(f"heat kernel overflows at u = {u}") from exc
        if b.real > 0:
            mag = np.abs(integrand)
            peak = mag.max(axis=1)
            edge = np.maximum(mag[:, 0], mag[:, -1])
            if np.any(edge > 1e-12 * np.where(peak > 0, peak, 1.0)):
                raise KernelDivergent(f"heat kernel grows along the contour at u = {u}")
        res[start:start + chunk] = integrand @ wts
    out[...] = (pref * res).reshape(out.shape)
    return out


# --- closed-form evolutions -----------------------------------------------------

def zu_coords(x1, x2, x3, E: float, p: ModelParams):
    den = 1j * np.asarray(x2) + E + p.m_omega
    z = (np.asarray(x3) - 1j * E * np.asarray(x1)) / den
    u = (p.m_omega - (1j * np.asarray(x2) + E)) / (p.m_omega + 1j * np.asarray(x2) + E)
    return z, u


def evolve_heisenberg(f2: Callable, t: float, grid1: UniformGrid, grid3: UniformGrid,
                      p: ModelParams) -> PhaseSlice:
    x1, x3 = np.meshgrid(grid1.points, grid3.points, indexing="ij")
    h, mw, w = p.hbar4, p.m_omega, p.omega
    wv = x3 - 1j * mw * x1
    env = np.exp(-0.5j * w * t + 1j * np.pi * h * x1 * x3
                 - np.pi * h / (2 * mw) * (mw ** 2 * x1 ** 2 + x3 ** 2))
    return PhaseSlice(grid1, grid3, 0.0, env * f2(np.exp(-1j * w * t) * wv))


def check_squeeze(seed: HeatSeed, E: float, x2s, p: ModelParams):
    R = seed.radius
    if math.isinf(R):
        return
    if R < 1:
        lo, hi = squeeze_bounds(R, p)
        if not lo < E < hi:
            raise SqueezeOutOfRange(f"E = {E} outside ({lo:.6g}, {hi:.6g}) for R = {R}")
    _, u = zu_coords(0.0, np.asarray(x2s, dtype=float), 0.0, E, p)
    if np.any(np.abs(u) >= R):
        raise SqueezeOutOfRange(f"|u| reaches {np.abs(u).max():.6g} >= R = {R}")


def evolve_G(seed: HeatSeed, E: float, t: float, grid1: UniformGrid, grid3: UniformGrid,
             x2s, p: ModelParams) -> PhaseVolume:
    x2s = np.atleast_1d(np.asarray(x2s, dtype=float))
    check_squeeze(seed, E, x2s, p)
    h, mw, w = p.hbar4, p.m_omega, p.omega
    x1, x3 = np.meshgrid(grid1.points, grid3.points, indexing="ij")
    out = np.empty((x2s.size, grid1.count, grid3.count), dtype=complex)
    rot = np.exp(-1j * w * t)
    for k, x2 in enumerate(x2s):
        den = 1j * x2 + E + mw
        z, u = zu_coords(x1, x2, x3, E, p)
        env = np.sqrt(E + mw) / np.sqrt(den) * np.exp(
            -0.5j * w * t - np.pi * h * E * x1 ** 2 - 2j * np.pi * p.h2 * x2
            - np.pi * h * (x3 - 1j * E * x1) ** 2 / den)
        out[k] = env * seed(rot * z, rot ** 2 * complex(u))
    return PhaseVolume(grid1, grid3, x2s, out)


def time_derivative(state_at: Callable, t: float, dt: float) -> np.ndarray:
    """Five-point central difference of ``state_at(t).values``."""
    f = [state_at(t + k * dt).values for k in (-2, -1, 1, 2)]
    return (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * dt)


def schrodinger_residual(state_at: Callable, t: float, p: ModelParams,
                         hamiltonian: Callable = hamiltonian_G, dt: float | None = None,
                         frame: float = 0.1) -> float:
    """``||i hbar4 d_t f - H f|| / ||f||`` over the interior region."""
    from .conditions import residual
    dt = 1e-3 / p.omega if dt is None else dt
    F = state_at(t)
    lhs = 1j * p.hbar4 * time_derivative(state_at, t, dt)
    r = lhs - hamiltonian(F, p).values
    return residual(F.with_values(r), F, "schrodinger", p, frame).relative


# --- squeeze geometry -------------------------------------------------------------

def cayley_map(x2, E: float, p: ModelParams):
    s = 1j * np.asarray(x2, dtype=float) + E
    return (p.m_omega - s) / (p.m_omega + s)


@dataclass(frozen=True)
class SqueezeGeometry:
    E: float
    center: float
    radius: float
    c: float

    @classmethod
    def of(cls, E: float, p: ModelParams) -> "SqueezeGeometry":
        mw = p.m_omega
        return cls(E, -E / (mw + E), mw / (mw + E), abs(mw - E) / (mw + E))


def squeeze_bounds(R: float, p: ModelParams) -> tuple[float, float]:
    """Admissible squeeze interval, evaluated in exact rational arithmetic and rounded once."""
    if not 0 < R < 1:
        raise ValueError("extension radius must lie in (0, 1)")
    r, mw = Fraction(R), Fraction(p.m_omega)
    return float((1 - r) / (1 + r) * mw), float((1 + r) / (1 - r) * mw)


def admissible_x2(E: float, R: float, p: ModelParams) -> float | None:
    """Half-width ``w`` of the arc ``|x2| < w`` with ``|u| < R``; ``None`` when empty."""
    if R >= 1:
        return math.inf
    mw = p.m_omega
    num = (R * (mw + E)) ** 2 - (mw - E) ** 2
    if num <= 0:
        return None
    return math.sqrt(num / (1 - R ** 2))


def jump_times(x2: float, E: float, omega: float | None, p: ModelParams) -> list[float]:
    """Times in ``[0, pi/omega)`` with ``Re(exp(-2 i omega t) u) = 0``."""
    omega = p.omega if omega is None else omega
    u = complex(cayley_map(x2, E, p))
    if abs(u) < 1e-15:
        raise CenterPoint("u = 0: no jumps")
    arg = math.atan2(u.imag, u.real)
    two_pi = 2 * math.pi
    return sorted(((arg + s * math.pi / 2) % two_pi) / (2 * omega) for s in (1, -1))


def cayley_circle(E: float, p: ModelParams, x2s=None) -> np.ndarray:
    """Image points of the line ``i x2 + E``; default samples are spread along the whole circle."""
    if x2s is None:
        theta = np.linspace(-np.pi / 2, np.pi / 2, 201)[1:-1]
        x2s = (E + p.m_omega) * np.tan(theta)
    return cayley_map(x2s, E, p)


def shear(x2: float, x1, x3):
    """Free-particle shear ``(x1, x3) -> (x1, x3 - x2 x1)``."""
    x1 = np.asarray(x1, dtype=float)
    return x1, np.asarray(x3, dtype=float) - x2 * x1
