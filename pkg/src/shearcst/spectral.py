"""Ladder operators, vacuum and eigenfunctions of the oscillator on the G image space.

Eigenfunctions are evaluated as polynomials in ``z`` and ``u`` with
non-negative integer powers only,

    Phi_j = (2^j j!)^(-1/2) sum_k j! / (k! (j-2k)!) (-2 a z)^(j-2k) (-u)^k * Phi_0,
    a = sqrt(2 pi hbar4 m w),

which equals ``(j!)^(-1/2) (L+)^j Phi_0`` and is regular at ``u = 0``, where it
reduces to ``(-2 a z)^j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import grids
from .dynamics import HeatSeed, evolve_G, zu_coords
from .errors import DegreeTooHigh
from .grids import ModelParams, UniformGrid
from .representations import _volume

MAX_DEGREE = 16


@dataclass(frozen=True)
class ZUCoords:
    z: complex
    u: complex

    @classmethod
    def at(cls, x1: float, x2: float, x3: float, E: float, p: ModelParams) -> "ZUCoords":
        z, u = zu_coords(x1, x2, x3, E, p)
        return cls(complex(z), complex(u))


def _ladder(F, p: ModelParams, sign: int):
    V, unwrap = _volume(F)
    _, x2, x3 = V.mesh()
    mw = p.m_omega
    pref = 1j / (2 * math.sqrt(math.pi * mw * p.hbar4))
    out = pref * (-grids.d1(V) - (x2 + sign * 1j * mw) * grids.d3(V)
                  + 2j * math.pi * p.hbar4 * x3 * V.values)
    return unwrap(V.with_values(out))


def ladder_plus(F, p: ModelParams):
    return _ladder(F, p, +1)


def ladder_minus(F, p: ModelParams):
    return _ladder(F, p, -1)


def vacuum_values(x1, x2, x3, E: float, p: ModelParams):
    den = 1j * np.asarray(x2) + E + p.m_omega
    expo = (-np.pi * p.hbar4 * E * np.asarray(x1) ** 2 - 2j * np.pi * p.h2 * np.asarray(x2)
            - np.pi * p.hbar4 * (np.asarray(x3) - 1j * E * np.asarray(x1)) ** 2 / den)
    return math.sqrt(2) * (p.m_omega * E) ** 0.25 / np.sqrt(den) * np.exp(expo)


def vacuum(grid1: UniformGrid, grid3: UniformGrid, x2s, E: float, p: ModelParams):
    return eigenstate(0, grid1, grid3, x2s, E, p)


def vacuum_zu(z, u, E: float, p: ModelParams):
    """The vacuum as written in terms of ``(z, u)`` (with ``conj(z)``), for comparison only."""
    mw = p.m_omega
    z = np.asarray(z, dtype=complex)
    u = np.asarray(u, dtype=complex)
    inner = z + (E / mw * (u - 1) + u) * np.conj(z)
    return ((E / mw) ** 0.25 * np.exp(2 * np.pi * p.h2 * E) * np.sqrt(1 - u)
            * np.exp(np.pi * p.hbar4 * E * mw ** 2 / (1 - u) ** 2 * inner ** 2)
            * np.exp(-2 * np.pi * mw / (1 - u) * (p.h2 * (1 + u) + p.hbar4 * z ** 2)))


def fit_vacuum_zu_constant(grid1: UniformGrid, grid3: UniformGrid, x2s, E: float,
                           p: ModelParams, frame: float = 0.25):
    """Best constant ``c`` with ``vacuum_zu ~ c * Phi_0``; returns ``(c, relative_misfit)``."""
    x1, x3 = np.meshgrid(grid1.points, grid3.points, indexing="ij")
    mask = grids.interior_mask(grid1.count, grid3.count, frame)
    a, b = [], []
    for x2 in np.atleast_1d(x2s):
        z, u = zu_coords(x1, x2, x3, E, p)
        a.append(vacuum_values(x1, x2, x3, E, p)[mask])
        b.append(vacuum_zu(z, u, E, p)[mask])
    a, b = np.concatenate(a), np.concatenate(b)
    c = np.vdot(a, b) / np.vdot(a, a)
    return complex(c), float(np.linalg.norm(b - c * a) / np.linalg.norm(b))


def hermite(j: int, y):
    """Physicists' Hermite polynomial by the three-term recurrence."""
    y = np.asarray(y, dtype=complex)
    prev, cur = np.ones_like(y), 2 * y
    if j == 0:
        return prev
    for n in range(1, j):
        prev, cur = cur, 2 * y * cur - 2 * n * prev
    return cur


def hermite_sum(j: int, y):
    """Explicit finite sum; reference for the recurrence."""
    y = np.asarray(y, dtype=complex)
    return sum((-1) ** k * math.factorial(j) / (math.factorial(k) * math.factorial(j - 2 * k))
               * (2 * y) ** (j - 2 * k) for k in range(j // 2 + 1))


def hermite_coefficients(j: int) -> np.ndarray:
    """Monomial coefficients of ``H_j``, lowest degree first."""
    c = np.zeros(j + 1)
    for k in range(j // 2 + 1):
        c[j - 2 * k] = (-1) ** k * math.factorial(j) / (math.factorial(k) * math.factorial(j - 2 * k)) \
            * 2.0 ** (j - 2 * k)
    return c


def eigen_polynomial(j: int, z, u, p: ModelParams):
    """``sum_k j!/(k!(j-2k)!) (-2 a z)^(j-2k) (-u)^k``; a heat polynomial in ``(z, u)``."""
    a = math.sqrt(2 * math.pi * p.hbar4 * p.m_omega)
    z = np.asarray(z, dtype=complex)
    u = np.asarray(u, dtype=complex)
    return sum(math.factorial(j) / (math.factorial(k) * math.factorial(j - 2 * k))
               * (-2 * a * z) ** (j - 2 * k) * (-u) ** k for k in range(j // 2 + 1))


class EigenSeed(HeatSeed):
    """The f2 profile whose flow is ``Phi_j`` (normalisation absorbed for the given E)."""

    radius = math.inf

    def __init__(self, j: int, E: float, p: ModelParams):
        _check_degree(j)
        self.j, self.E, self.p = j, E, p
        mw = p.m_omega
        self.scale = (math.sqrt(2) * (mw * E) ** 0.25 / math.sqrt(E + mw)
                      / math.sqrt(2.0 ** j * math.factorial(j)))

    def __call__(self, z, u):
        return self.scale * eigen_polynomial(self.j, z, u, self.p)


def _check_degree(j: int):
    if not 0 <= j <= MAX_DEGREE:
        raise DegreeTooHigh(f"degree {j} outside 0..{MAX_DEGREE}")


def eigenstate(j: int, grid1: UniformGrid, grid3: UniformGrid, x2s, E: float, p: ModelParams):
    _check_degree(j)
    return evolve_G(EigenSeed(j, E, p), E, 0.0, grid1, grid3, x2s, p)


def evolve_eigenstate(j: int, t: float, grid1: UniformGrid, grid3: UniformGrid, x2s,
                      E: float, p: ModelParams):
    _check_degree(j)
    return evolve_G(EigenSeed(j, E, p), E, t, grid1, grid3, x2s, p)


def ladder_power(F, p: ModelParams, j: int):
    """``(j!)^(-1/2) (L+)^j F``."""
    for _ in range(j):
        F = ladder_plus(F, p)
    return F.with_values(F.values / math.sqrt(math.factorial(j)))
