"""Grid studies behind two numerical defaults.

1. The x2 step: S-residual of Phi_6 for x2 steps 1/64 .. 1/512 (fourth-order stencil).
2. Cauchy-Riemann residual of peeled transforms: eighth-order differences against the
   product-rule evaluation, in the Gaussian-weighted norm.
"""
import numpy as np

from shearcst import spectral as spec
from shearcst.conditions import peel, residual_CR, residual_S
from shearcst.cst import cst_slice, squeezed_state
from shearcst.grids import ModelParams, UniformGrid, x2_stencil_grid


def main():
    p = ModelParams()
    g = UniformGrid.centered(128, 1 / np.sqrt(128))
    print("x2 step    S residual on Phi_6 (E = 1.5)")
    for k in (64, 128, 256, 512):
        P = spec.eigenstate(6, g, g, x2_stencil_grid(0.0, 1 / k, 3), 1.5, p)
        print(f"1/{k:<7} {residual_S(P, p).relative:.2e}")
    print("\ngrid          q    fd8        product")
    for grid in (g, UniformGrid.centered(256, 1 / 16)):
        for q in (0.6, 1.0, 2.0):
            B = peel(cst_slice(squeezed_state(q, grid, p), squeezed_state(1.5, grid, p), 0.3, p), 1.5, p)
            a = residual_CR(B, 1.5, p, method="fd8", weighted=True).relative
            b = residual_CR(B, 1.5, p, method="product", weighted=True).relative
            print(f"{grid.count:>3} x {grid.step:.4f}  {q:<4} {a:.2e}   {b:.2e}")


if __name__ == "__main__":
    main()
