"""Jones propagation: ordered product versus single exponential
============================================================

Every fiber step applies exp(-i f (b_x s1 + b_y s2) dz). Because the
generators at different positions do not commute, the z-ordered product
differs from the exponential of the integrated birefringence unless only
one axis is active.
"""

# %%
import numpy as np

from pmdsim import FiberParams, derive_rates
from pmdsim.birefringence import sample_trajectory
from pmdsim.propagation import propagate_integrated, propagate_ordered, trajectory_array, unitarity_error

d = derive_rates(FiberParams(20.0, 12.0, 0.6))
bx, by = sample_trajectory(d, 2000, 0.1, np.random.default_rng(3))

generic = trajectory_array(bx, by, 0.1)
single = trajectory_array(bx, 0.0, 0.1)

# %%
for name, traj in (("single axis", single), ("two axes", generic)):
    u = propagate_ordered(traj, 1.0)
    v = propagate_integrated(traj, 1.0)
    print(f"{name:12s} max|U_ordered - U_integrated| = {np.max(np.abs(u - v)):.3e}   "
          f"unitarity error {unitarity_error(u):.1e}, det {np.linalg.det(u):.12f}")

# %% Output polarization for horizontal input, at the carrier and 10 widths away
psi = np.array([1, 0], dtype=complex)
for f in (1.0, 1.0 + 1e-3):
    out = propagate_ordered(generic, f) @ psi
    print(f"f={f}: |C0|^2={abs(out[0])**2:.4f} |C1|^2={abs(out[1])**2:.4f}")
