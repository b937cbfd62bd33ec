"""Jones-matrix propagation through a sampled birefringence trajectory.

Convention: a step of length ``dz`` with local birefringence ``(b_x, b_y)``
at frequency scale ``f`` applies::

    exp(-i * kappa * f * (b_x sigma_1 + b_y sigma_2) * dz)

``kappa = 1`` combines the ``-i/2`` of the reduced wave equation with the
factor 2 of the linear birefringence vector. ``kappa = 0.5`` reproduces the
coefficient printed in the single-exponential form of the solution.
"""

from __future__ import annotations

import numpy as np

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_1, SIGMA_2, SIGMA_3])

H = np.array([1, 0], dtype=complex)
V = np.array([0, 1], dtype=complex)


def su2_rotation(hx, hy) -> np.ndarray:
    """Closed form of ``exp(-i (hx sigma_1 + hy sigma_2))``.

    Broadcasts over array inputs; the result has shape ``shape + (2, 2)``.
    """
    hx = np.asarray(hx, dtype=float)
    hy = np.asarray(hy, dtype=float)
    r = np.hypot(hx, hy)
    small = r < 1e-12
    safe_r = np.where(small, 1.0, r)
    sinc = np.where(small, 1.0, np.sin(safe_r) / safe_r)
    cos = np.cos(r)
    u = np.empty(r.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = cos
    u[..., 1, 1] = cos
    u[..., 0, 1] = -1j * sinc * (hx - 1j * hy)
    u[..., 1, 0] = -1j * sinc * (hx + 1j * hy)
    return u


def _columns(trajectory):
    traj = np.asarray(trajectory, dtype=float)
    if traj.ndim != 2 or traj.shape[1] != 3:
        raise ValueError("trajectory must be a sequence of (b_x, b_y, dz) triples")
    return traj[:, 0], traj[:, 1], traj[:, 2]


def propagate_ordered(trajectory, f_omega: float, kappa: float = 1.0) -> np.ndarray:
    """z-ordered product of per-step rotations (left endpoint sampling).

    Later steps multiply from the left, so the result maps the input Jones
    vector at ``z = 0`` to the output at the end of the trajectory.
    """
    bx, by, dz = _columns(trajectory)
    steps = su2_rotation(kappa * f_omega * bx * dz, kappa * f_omega * by * dz)
    u = np.eye(2, dtype=complex)
    for r in steps:
        u = r @ u
    return u


def propagate_integrated(trajectory, f_omega: float, kappa: float = 1.0) -> np.ndarray:
    """Single exponential of the integrated birefringence.

    Exact only when the generators commute (one axis of birefringence);
    otherwise it ignores the z-ordering.
    """
    bx, by, dz = _columns(trajectory)
    total_x = float(np.sum(bx * dz))
    total_y = float(np.sum(by * dz))
    return su2_rotation(kappa * f_omega * total_x, kappa * f_omega * total_y)


def unitarity_error(u) -> float:
    """``max |U^dagger U - I|`` over entries (and over a stack of matrices)."""
    u = np.asarray(u)
    gram = np.conj(np.swapaxes(u, -1, -2)) @ u
    return float(np.max(np.abs(gram - np.eye(2))))


def trajectory_array(bx, by, dz) -> np.ndarray:
    """Stack sampled components into the ``(n, 3)`` form used above."""
    bx = np.asarray(bx, dtype=float)
    by = np.broadcast_to(np.asarray(by, dtype=float), bx.shape)
    return np.column_stack([bx, by, np.full(bx.shape, float(dz))])
