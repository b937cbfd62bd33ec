"""Photon spectra, fidelity and degree of polarization
===================================================

Builds the three frequency grids and evaluates the fidelity and the degree
of polarization on a few textbook density matrices.
"""

# %%
import math

import numpy as np

from pmdsim import SpectrumSpec, bloch_vector, build_grid, dop, fidelity, input_state

omega0 = 2 * math.pi * 299_792_458 / 1550e-9
dw = 2 * math.pi * 20e9

for kind in ("gaussian", "lorentzian", "rectangular"):
    g = build_grid(SpectrumSpec(kind, omega0, dw, 65))
    x = (g.nodes - omega0) / dw
    print(f"{kind:12s} span +-{x.max():7.2f} widths, weight sum {g.weights.sum():.15f}, "
          f"<x^2> = {np.sum(g.weights * x**2):.4f}")

# %%
psi, rho_in = input_state(0.707)
mixed = np.eye(2) / 2
partly = 0.6 * rho_in + 0.4 * mixed
for name, rho in (("input", rho_in), ("partly mixed", partly), ("unpolarized", mixed)):
    print(f"{name:13s} F={fidelity(rho_in, rho):.5f}  DOP={dop(rho):.5f}  Bloch={np.round(bloch_vector(rho), 4)}")
