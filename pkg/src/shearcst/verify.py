"""Invariant suites run by ``shearcst verify``; one suite per acceptance criterion.

Each suite returns a list of :class:`Check` rows (residual, tolerance, verdict).
Package errors raised inside a suite become failing rows that name the error.
"""
from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import conditions as cond
from . import cst, dynamics as dyn, spectral as spec
from .config import RunConfig
from .errors import ShearCSTError
from .grids import (ModelParams, PhaseVolume, SampledLine, UniformGrid, measure_weight,
                    volume_grid, x2_stencil_grid)
from .group import (BASIS, X1, X2, X3, X4, AlgebraVector, GroupElement, bracket, multiply)
from .representations import commutator, casimir_action, derived_pi, derived_pi_tilde, lie_derivative


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    residual: float
    tolerance: float
    passed: bool
    note: str = ""


def check(suite: str, name: str, residual: float, tolerance: float, note: str = "",
          inclusive: bool = False) -> Check:
    r = float(residual)
    ok = bool(np.isfinite(r) and (r <= tolerance if inclusive else r < tolerance))
    return Check(suite, name, r, float(tolerance), ok, note)


def _rel(a, b, mask=None) -> float:
    a, b = np.asarray(a), np.asarray(b)
    if mask is not None:
        a, b = a[mask], b[mask]
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def _grids(cfg: RunConfig):
    p = cfg.params
    return cfg.grids.y_grid(p), cfg.grids.x3_grid(p)


# --- 1: algebra -----------------------------------------------------------------

def suite_algebra(cfg: RunConfig) -> list[Check]:
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(1000):
        a, b, c = (GroupElement(*rng.uniform(-3, 3, 4)) for _ in range(3))
        lhs = multiply(multiply(a, b), c).as_array()
        rhs = multiply(a, multiply(b, c)).as_array()
        worst = max(worst, float(np.max(np.abs(lhs - rhs)) / max(1.0, np.max(np.abs(lhs)))))
    table = {(0, 1): X3, (0, 2): X4}
    mismatch = 0.0
    for i in range(4):
        for j in range(4):
            want = table.get((i, j))
            if want is None:
                want = -1 * table[(j, i)] if (j, i) in table else AlgebraVector()
            got = bracket(BASIS[i], BASIS[j])
            mismatch = max(mismatch, float(np.max(np.abs(got.as_array() - want.as_array()))))
    return [check("algebra", "associativity x1000", worst, 1e-12),
            check("algebra", "bracket table (exact)", mismatch, 0.0, inclusive=True)]


# --- 2: operator commutators ----------------------------------------------------

def smooth_test_volume(grid1: UniformGrid, grid3: UniformGrid, x2s) -> PhaseVolume:
    """A smooth, rapidly decaying volume with genuine x2 dependence."""
    V = volume_grid(grid1, grid3, x2s)
    x1, x2, x3 = V.mesh()
    vals = (np.exp(-np.pi * ((1 + 0.3 * x2) * x1 ** 2 + 0.8 * x3 ** 2) + 1j * x1 * x3)
            * (1 + x2 * x1 - 0.5j * x3))
    return V.with_values(vals + 0j)


def suite_commutators(cfg: RunConfig) -> list[Check]:
    p = cfg.params
    yg, g3 = _grids(cfg)
    y = yg.points
    f = SampledLine(yg, np.exp(-np.pi * p.hbar4 * y ** 2) * (1 + 0.3 * y - 0.2j * y ** 2))
    out = []
    pairs = [(X1, X2, X3, "[X1,X2]=X3"), (X1, X3, X4, "[X1,X3]=X4")]
    for X, Y, Z, label in pairs:
        lhs = commutator(derived_pi, X, Y, f, p).values
        out.append(check("commutators", f"d pi {label}", _rel(lhs, derived_pi(Z, f, p).values), 1e-6))
    V = smooth_test_volume(yg, g3, x2_stencil_grid(0.1, cfg.grids.x2_step, 3))
    region = cond.residual_region(V, 0.1, uses_x2=True)
    for op, name in ((lie_derivative, "L"), (derived_pi_tilde, "d pi~")):
        for X, Y, Z, label in pairs:
            lhs = commutator(op, X, Y, V, p).values
            out.append(check("commutators", f"{name} {label}",
                             _rel(lhs, op(Z, V, p).values, region), 1e-4))
    return out


# --- 3: CST closed form ---------------------------------------------------------

CST_CASES = ((1.0, 1.0), (1.0, 1.5), (2.0, 0.7))


def cst_grid(n: int = 64, p: ModelParams | None = None) -> UniformGrid:
    p = ModelParams() if p is None else p
    return UniformGrid.centered(n, 1.0 / math.sqrt(p.hbar4 * n))


def suite_cst_closed_form(cfg: RunConfig) -> list[Check]:
    p = cfg.params
    yg = cst_grid(64, p)
    out = []
    for q, E in CST_CASES:
        f = cst.squeezed_state(q, yg, p)
        phi = cst.squeezed_state(E, yg, p)
        worst = 0.0
        for x2 in (0.0, 0.25):
            S = cst.cst_slice(f, phi, x2, p)
            ref = cst.closed_form_slice(q, E, S.grid1, S.grid3, x2, p)
            worst = max(worst, _rel(S.values, ref.values))
        out.append(check("cst", f"closed form q={q} E={E} (64x64)", worst, 1e-8))
    return out


# --- 4: isometry and orthogonality ----------------------------------------------

def random_state(rng: np.random.Generator, grid: UniformGrid, p: ModelParams) -> SampledLine:
    """Gaussian envelope times a random cubic: smooth and negligible at the grid edge."""
    y = grid.points
    c = rng.normal(size=4) + 1j * rng.normal(size=4)
    width = rng.uniform(0.8, 1.6)
    y0 = rng.uniform(-0.5, 0.5)
    v = np.exp(-np.pi * p.hbar4 * width * (y - y0) ** 2) * np.polynomial.polynomial.polyval(y - y0, c)
    return SampledLine(grid, v, measure_weight("dimensionless", p))


def suite_isometry(cfg: RunConfig) -> list[Check]:
    p = cfg.params
    yg, _ = _grids(cfg)
    rng = np.random.default_rng(cfg.seed)
    phi = cst.make_fiducial(cfg.fiducial, yg, p)
    psi = cst.squeezed_state(cfg.q, yg, p)
    x2s = (-0.5, -0.25, 0.0, 0.25, 0.5)
    iso = orth = indep = 0.0
    for _ in range(20):
        f1, f2 = random_state(rng, yg, p), random_state(rng, yg, p)
        norms = []
        for x2 in x2s:
            W1 = cst.cst_slice(f1, phi, x2, p)
            W2 = cst.cst_slice(f2, psi, x2, p)
            n = cst.norm_x2(W1, p)
            norms.append(n)
            iso = max(iso, abs(n - f1.norm()) / f1.norm())
            lhs = cst.inner_product_x2(W1, W2, p)
            rhs = f1.inner(f2) * np.conj(phi.inner(psi))
            orth = max(orth, abs(lhs - rhs) / (f1.norm() * f2.norm()))
        indep = max(indep, (max(norms) - min(norms)) / f1.norm())
    return [check("isometry", "||W f||_x2 = ||f|| (20 states x 5 x2)", iso, 1e-6),
            check("isometry", "orthogonality relation", orth, 1e-6),
            check("isometry", "x2 independence of the norm", indep, 1e-6)]


# --- 5: image-space conditions ----------------------------------------------------

def suite_conditions(cfg: RunConfig) -> list[Check]:
    p = cfg.params
    yg, g3 = _grids(cfg)
    E = cfg.E
    x2s = x2_stencil_grid(cfg.grids.x2_center, cfg.grids.x2_step, 3)
    out = []
    worst_C = worst_S = 0.0
    rng = np.random.default_rng(cfg.seed + 1)
    phi = cst.squeezed_state(E, yg, p)
    states = [cst.squeezed_state(q, yg, p) for q in (0.7, 1.0, 2.0)]
    states += [random_state(rng, yg, p) for _ in range(3)]
    for f in states:
        W = cst.cst_volume(f, phi, x2s, p)
        worst_C = max(worst_C, cond.residual_C(W, E, p).relative)
        worst_S = max(worst_S, cond.residual_S(W, p).relative)
    out.append(check("conditions", "C on CST images", worst_C, 1e-5))
    out.append(check("conditions", "S on CST images", worst_S, 1e-5))
    worst_C = worst_S = 0.0
    for j in range(7):
        P = spec.eigenstate(j, yg, g3, x2s, E, p)
        worst_C = max(worst_C, cond.residual_C(P, E, p).relative)
        worst_S = max(worst_S, cond.residual_S(P, p).relative)
    out.append(check("conditions", "C on Phi_j, j <= 6", worst_C, 1e-5))
    out.append(check("conditions", "S on Phi_j, j <= 6", worst_S, 1e-5))
    W = cst.cst_volume(states[3], phi, x2s, p)
    left = casimir_action(derived_pi_tilde, W, p).values
    right = casimir_action(lie_derivative, W, p).values
    region = cond.residual_region(W, 0.1, uses_x2=True)
    out.append(check("conditions", "Casimir left = right action", _rel(left, right, region), 1e-10))
    return out


# --- 6: dynamics -------------------------------------------------------------------

def dynamics_seeds(cfg: RunConfig):
    p = cfg.params
    return [dyn.GaussianSeed(cfg.seed_alpha, p),
            dyn.HeatPolynomialSeed([0.3, 1.0, 0.5, 0.2], p)]


def suite_dynamics(cfg: RunConfig) -> list[Check]:
    p = cfg.params
    yg, g3 = _grids(cfg)
    E = cfg.E
    out = []
    for k, seed in enumerate(dynamics_seeds(cfg)):
        worst = 0.0
        for x2 in (-0.25, 0.0, 0.25):
            for t in (0.0, 0.3, 1.1):
                t = t / p.omega
                r = dyn.schrodinger_residual(
                    lambda tt: dyn.evolve_G(seed, E, tt, yg, g3, [x2], p), t, p)
                worst = max(worst, r)
        out.append(check("dynamics", f"Schroedinger residual, seed {k}", worst, 1e-4))
    x2s = x2_stencil_grid(0.25, cfg.grids.x2_step, 3)
    worst = 0.0
    for seed in dynamics_seeds(cfg):
        F = dyn.evolve_G(seed, E, 0.3 / p.omega, yg, g3, x2s, p)
        H = dyn.hamiltonian_G(F, p)
        H1 = dyn.reduced_H1(F, E, p)
        region = cond.residual_region(F, 0.1, uses_x2=True)
        worst = max(worst, _rel(H1.values, H.values, region))
    out.append(check("dynamics", "H_G vs H1 on constrained inputs", worst, 1e-4))
    return out


# --- 7: reduction identity ------------------------------------------------------------

def suite_reduction(cfg: RunConfig) -> list[Check]:
    p = cfg.params
    yg, g3 = _grids(cfg)
    seeds = [dyn.GaussianSeed(1.0, p), dyn.HeatPolynomialSeed([0.3, 1.0, 0.5, 0.2], p),
             dyn.SumSeed(dyn.GaussianSeed(0.5, p, 0.7), dyn.HeatPolynomialSeed([0, 0, 1], p))]
    worst = 0.0
    for seed in seeds:
        for t in (0.0, 0.3, 1.1):
            A = dyn.evolve_G(seed, p.m_omega, t, yg, g3, [0.0], p).slice(0).values
            B = dyn.evolve_heisenberg(dyn.heisenberg_seed(seed, p), t, yg, g3, p).values
            worst = max(worst, float(np.max(np.abs(A - B)) / np.max(np.abs(B))))
    return [check("reduction", "evolve_G(x2=0, E=m w) = evolve_heisenberg (3 seeds)", worst, 1e-10)]


# --- 8: spectrum ----------------------------------------------------------------------

def eigenvalue_table(cfg: RunConfig, j_max: int):
    """Rows ``(j, measured, expected, residual)`` on the centre x2 slice."""
    p = cfg.params
    yg, g3 = _grids(cfg)
    rows = []
    for j in range(j_max + 1):
        P = spec.eigenstate(j, yg, g3, [cfg.grids.x2_center], cfg.E, p).slice(0)
        HP = dyn.hamiltonian_G(P, p)
        measured = (cst.inner_product_x2(HP, P, p) / cst.inner_product_x2(P, P, p)).real
        expected = p.hbar4 * p.omega * (j + 0.5)
        rows.append((j, measured, expected, abs(measured - expected)))
    return rows


def suite_spectrum(cfg: RunConfig) -> list[Check]:
    p = cfg.params
    yg, g3 = _grids(cfg)
    E = cfg.E
    rows = eigenvalue_table(cfg, 8)
    out = [check("spectrum", "<Phi_j, H Phi_j> = hbar w (j + 1/2), j <= 8",
                 max(r[3] for r in rows), 1e-5)]
    x2s = x2_stencil_grid(cfg.grids.x2_center, cfg.grids.x2_step, 3)
    P = [spec.eigenstate(j, yg, g3, x2s, E, p) for j in range(9)]
    region = cond.residual_region(P[0], 0.1)
    V = smooth_test_volume(yg, g3, x2s)
    comm = (spec.ladder_minus(spec.ladder_plus(V, p), p).values
            - spec.ladder_plus(spec.ladder_minus(V, p), p).values)
    out.append(check("spectrum", "[L-, L+] = I", _rel(comm, V.values, region), 1e-8))
    worst = 0.0
    for j in range(1, 9):
        lhs = spec.ladder_minus(P[j], p).values
        worst = max(worst, _rel(lhs, math.sqrt(j) * P[j - 1].values, region))
    out.append(check("spectrum", "L- Phi_j = sqrt(j) Phi_(j-1)", worst, 1e-5))
    worst = 0.0
    for x2k in (0, 2, 4):
        S = [Pj.slice(x2k) for Pj in P]
        gram = np.array([[cst.inner_product_x2(a, b, p) for b in S] for a in S])
        worst = max(worst, float(np.max(np.abs(gram - np.eye(len(S))))))
    out.append(check("spectrum", "orthonormality j, k <= 8", worst, 1e-5))
    return out


# --- 9: geometry ----------------------------------------------------------------------

def suite_geometry(cfg: RunConfig) -> list[Check]:
    p = cfg.params
    mw = p.m_omega
    worst = 0.0
    for E in (0.3, 0.7, 1.0, 1.5, 4.0):
        E = E * mw
        geo = dyn.SqueezeGeometry.of(E, p)
        u = dyn.cayley_circle(E, p)
        worst = max(worst, float(np.max(np.abs(np.abs(u - geo.center) - geo.radius))))
    lo, hi = dyn.squeeze_bounds(1.0 / 3, p)
    exact = 0.0 if (lo, hi) == (0.5 * mw, 2.0 * mw) else max(abs(lo - 0.5 * mw), abs(hi - 2.0 * mw))
    jumps = 0.0
    for x2 in (-1.0, -0.3, 0.0, 0.4, 2.0):
        for E in (0.5, 1.5, 3.0):
            if x2 == 0.0 and E == mw:
                continue
            u = complex(dyn.cayley_map(x2, E * mw, p))
            for t in dyn.jump_times(x2, E * mw, p.omega, p):
                jumps = max(jumps, abs((np.exp(-2j * p.omega * t) * u).real))
    return [check("geometry", "Cayley images on the circle (5 E)", worst, 1e-12),
            check("geometry", "squeeze_bounds(1/3) = (0.5, 2) m w (exact)", exact, 0.0, inclusive=True),
            check("geometry", "jump_times residual", jumps, 1e-12)]


# --- 10: heat propagator --------------------------------------------------------------

def suite_heat(cfg: RunConfig) -> list[Check]:
    p = cfg.params
    zg = UniformGrid.centered(1024, 16.0 / 1024)
    zs = np.linspace(-1.0, 1.0, 9)
    gauss = 0.0
    for alpha in (0.5, 1.0, 2.0):
        g = SampledLine(zg, np.exp(-alpha * zg.points ** 2) + 0j)
        ref = dyn.GaussianSeed(alpha, p)
        for u in (-0.3, -0.1 + 0.05j, -0.2 - 0.15j):
            got = dyn.heat_propagate(g, u, p, z=zs)
            want = ref(zs, u)
            gauss = max(gauss, float(np.max(np.abs(got - want)) / np.max(np.abs(want))))
    kappa = p.heat_rate
    g = SampledLine(zg, np.exp(-zg.points ** 2) * (1 + 0.5 * zg.points) + 0j)
    h = 1e-2
    pde = 0.0
    for u in (-0.3, -0.2 + 0.1j):
        f = lambda z, uu: dyn.heat_propagate(g, uu, p, z=z)
        du = (f(zs, u - 2 * h) - 8 * f(zs, u - h) + 8 * f(zs, u + h) - f(zs, u + 2 * h)) / (12 * h)
        dzz = (-f(zs - 2 * h, u) + 16 * f(zs - h, u) - 30 * f(zs, u)
               + 16 * f(zs + h, u) - f(zs + 2 * h, u)) / (12 * h * h)
        pde = max(pde, float(np.max(np.abs(du + kappa * dzz)) / np.max(np.abs(du))))
    return [check("heat", "Gaussian in, Gaussian out", gauss, 1e-6),
            check("heat", "heat-equation residual", pde, 1e-4)]


# --- 11: CLI round trip ------------------------------------------------------------------

def suite_emission(cfg: RunConfig) -> list[Check]:
    from .emit import read_table, slice_table, write_table
    p = cfg.params
    yg = cst_grid(64, p)
    S = cst.cst_slice(cst.squeezed_state(cfg.q, yg, p), cst.squeezed_state(cfg.E, yg, p), 0.25, p)
    worst = 0.0
    with tempfile.TemporaryDirectory() as tmp:
        for fmt in ("csv", "json"):
            t = slice_table(S, with_density=True)
            back = read_table(write_table(t, os.path.join(tmp, f"s.{fmt}"), fmt))
            same = (np.array_equal(back.data, t.data) and back.columns == t.columns
                    and all(back.grids[a] == g for a, g in t.grids.items()))
            worst = max(worst, 0.0 if same else 1.0)
    return [check("emission", "CSV/JSON round trip (bit-exact)", worst, 0.0, inclusive=True)]


SUITES: dict[str, Callable[[RunConfig], list[Check]]] = {
    "algebra": suite_algebra,
    "commutators": suite_commutators,
    "cst": suite_cst_closed_form,
    "isometry": suite_isometry,
    "conditions": suite_conditions,
    "dynamics": suite_dynamics,
    "reduction": suite_reduction,
    "spectrum": suite_spectrum,
    "geometry": suite_geometry,
    "heat": suite_heat,
    "emission": suite_emission,
}


def run_suite(name: str, cfg: RunConfig) -> list[Check]:
    try:
        return SUITES[name](cfg)
    except ShearCSTError as exc:
        return [Check(name, "suite aborted", float("nan"), float("nan"), False,
                      f"{type(exc).__name__}: {exc}")]


def run_all(cfg: RunConfig, names=None) -> list[Check]:
    rows = []
    for name in (names or SUITES):
        rows.extend(run_suite(name, cfg))
    return rows
