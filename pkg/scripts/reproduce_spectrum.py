"""Eigenvalue table and ladder checks for the oscillator eigenfunctions.

usage: python scripts/reproduce_spectrum.py [J_MAX]
"""
import math
import sys

from shearcst import spectral as spec
from shearcst.config import RunConfig
from shearcst.conditions import residual_region
from shearcst.grids import x2_stencil_grid
from shearcst.verify import eigenvalue_table


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    j_max = int(argv[0]) if argv else 8
    cfg = RunConfig()
    p = cfg.params
    print(f"{'j':>3} {'<H>':>22} {'hbar w (j+1/2)':>16} {'|diff|':>10}")
    for j, measured, expected, diff in eigenvalue_table(cfg, j_max):
        print(f"{j:>3} {measured:22.15f} {expected:16.3f} {diff:10.2e}")
    g = cfg.grids.y_grid(p)
    x2s = x2_stencil_grid(0.0, cfg.grids.x2_step, 2)
    modes = [spec.eigenstate(j, g, g, x2s, cfg.E, p) for j in range(j_max + 1)]
    region = residual_region(modes[0], 0.1)
    for j in range(1, j_max + 1):
        lhs = spec.ladder_minus(modes[j], p).values[region]
        rhs = math.sqrt(j) * modes[j - 1].values[region]
        err = abs(lhs - rhs).max() / abs(rhs).max()
        print(f"L- Phi_{j} vs sqrt({j}) Phi_{j - 1}: {err:.2e}")
    c, misfit = spec.fit_vacuum_zu_constant(g, g, x2_stencil_grid(0.0, 0.25, 2), cfg.E, p)
    print(f"(z, u) vacuum form: best constant {c:.4f}, relative misfit {misfit:.3f}")


if __name__ == "__main__":
    main()
