"""Polarization density operators, fidelity and degree of polarization.

All functions accept a single ``(2, 2)`` matrix or a stack ``(..., 2, 2)``.
"""

from __future__ import annotations

import numpy as np

from .propagation import PAULI
from .spectra import SpectralGrid

TRACE_TOLERANCE = 1e-8
CLAMP_TOLERANCE = 1e-12
# rounding floor of a 2x2 determinant with unit trace
DET_FLOOR = 1e-15


def input_state(alpha: float, beta: complex | None = None):
    """Input Jones vector ``alpha|0> + beta|1>`` and its projector.

    ``beta`` defaults to the real, non-negative ``sqrt(1 - alpha**2)``.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    if beta is None:
        beta = np.sqrt(max(1.0 - alpha * alpha, 0.0))
    elif abs(alpha**2 + abs(beta) ** 2 - 1.0) > 1e-12:
        raise ValueError("|alpha|^2 + |beta|^2 must equal 1")
    vec = np.array([alpha, beta], dtype=complex)
    return vec, np.outer(vec, vec.conj())


def reduce_density(per_omega_averages, grid: SpectralGrid) -> np.ndarray:
    """Weighted sum over the frequency axis (axis ``-3``) of ensemble averages.

    Raises
    ------
    ValueError
        If the trace of the result departs from 1 by more than 1e-8, which
        points at a non-unitary propagator upstream.
    """
    avgs = np.asarray(per_omega_averages)
    if avgs.shape[-3] != len(grid):
        raise ValueError(f"expected {len(grid)} frequency nodes, got {avgs.shape[-3]}")
    rho = np.einsum("...kij,k->...ij", avgs, grid.weights)
    trace = np.real(np.trace(rho, axis1=-2, axis2=-1))
    worst = np.max(np.abs(trace - 1.0))
    if worst > TRACE_TOLERANCE:
        raise ValueError(f"reduced density operator has trace error {worst:.3g}")
    return rho


def _clamped_sqrt(x, what):
    x = np.asarray(x, dtype=float)
    if np.any(x < -CLAMP_TOLERANCE):
        raise ValueError(f"negative radicand in {what}: {x.min():.3g}")
    return np.sqrt(np.clip(x, 0.0, None))


def _det(rho):
    det = np.real(rho[..., 0, 0] * rho[..., 1, 1] - rho[..., 0, 1] * rho[..., 1, 0])
    return np.where(np.abs(det) < DET_FLOOR, 0.0, det)


def fidelity(rho_in, rho_out):
    """Uhlmann fidelity ``tr sqrt(sqrt(rho_in) rho_out sqrt(rho_in))`` for qubits.

    Uses the two-level closed form ``sqrt(tr(rho_in rho_out) + 2 sqrt(det rho_in det rho_out))``,
    so no matrix square root is taken. Note this is the root fidelity, not its square.
    """
    rho_in = np.asarray(rho_in)
    rho_out = np.asarray(rho_out)
    overlap = np.real(np.einsum("...ij,...ji->...", rho_in, rho_out))
    dets = _clamped_sqrt(_det(rho_in) * _det(rho_out), "det product")
    f = _clamped_sqrt(overlap + 2.0 * dets, "fidelity")
    return np.minimum(f, 1.0) if f.ndim else float(min(f, 1.0))


def fidelity_eig(rho_in, rho_out) -> float:
    """Reference fidelity via eigendecompositions (slow, single pair)."""
    vals, vecs = np.linalg.eigh(rho_in)
    root = (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    inner = root @ rho_out @ root
    inner = 0.5 * (inner + inner.conj().T)
    return float(np.sum(np.sqrt(np.clip(np.linalg.eigvalsh(inner), 0, None))))


def purity(rho):
    rho = np.asarray(rho)
    return np.real(np.einsum("...ij,...ji->...", rho, rho))


def dop(rho):
    """Degree of polarization ``sqrt(2 tr(rho^2) - 1)``."""
    d = np.minimum(_clamped_sqrt(2.0 * purity(rho) - 1.0, "degree of polarization"), 1.0)
    return d if d.ndim else float(d)


def bloch_vector(rho) -> np.ndarray:
    """Stokes/Bloch components ``r_i = tr(rho sigma_i)``, last axis of length 3."""
    return np.real(np.einsum("...ij,aji->...a", np.asarray(rho), PAULI))


def check_density(rho, atol: float = 1e-10) -> None:
    """Raise ``ValueError`` unless every matrix is Hermitian, unit-trace and PSD."""
    rho = np.asarray(rho)
    herm = np.max(np.abs(rho - np.conj(np.swapaxes(rho, -1, -2))))
    if herm > atol:
        raise ValueError(f"density operator not Hermitian (error {herm:.3g})")
    trace = np.max(np.abs(np.real(np.trace(rho, axis1=-2, axis2=-1)) - 1.0))
    if trace > atol:
        raise ValueError(f"density operator trace error {trace:.3g}")
    herm_part = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
    low = np.min(np.linalg.eigvalsh(herm_part))
    if low < -atol:
        raise ValueError(f"density operator has negative eigenvalue {low:.3g}")
