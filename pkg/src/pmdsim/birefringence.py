"""Stochastic linear birefringence along the fiber.

Each transverse component of the birefringence, ``b_x(z)`` and ``b_y(z)``,
is the difference of two exponential filters driven by one shared white
Gaussian noise::

    m_i(z) = exp(-lam_i z) * [lam_i b(0) + int_0^z g(z') exp(lam_i z') dz']
    b(z)   = (m_2(z) - m_1(z)) / (lam_2 - lam_1)

The filter modes obey ``dm_i = -lam_i m_i dz + dW`` with the *same* ``dW``,
so they can be advanced exactly over any step with a correlated Gaussian
increment. The Stokes-space birefringence vector is ``(2 b_x, 2 b_y, 0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import lfilter

SPEED_OF_LIGHT = 299_792_458.0
REPEATED_ROOT_GAP = 1e-6


def carrier_from_wavelength(wavelength_m: float) -> float:
    """Angular carrier frequency (rad/s) for a vacuum wavelength in meters."""
    return 2.0 * math.pi * SPEED_OF_LIGHT / wavelength_m


@dataclass(frozen=True)
class FiberParams:
    """Physical description of the fiber channel.

    Parameters
    ----------
    beat_length : float
        Beat length ``L_b`` in meters.
    coupling_length : float
        Inverse coupling strength ``L_f`` in meters.
    fluctuation : float
        Mean fluctuation magnitude ``eps`` in (0, 1), excluding 0.5.
    carrier : float
        Carrier angular frequency ``omega_0`` in rad/s. Defaults to 1550 nm.
    gamma : float, optional
        Slope of ``f(omega) = gamma * omega`` in seconds. ``None`` selects
        ``1 / carrier`` so that ``f(omega_0) = 1``.
    step : float
        Propagation step ``dz`` in meters.
    """

    beat_length: float
    coupling_length: float
    fluctuation: float
    carrier: float = carrier_from_wavelength(1550e-9)
    gamma: float | None = None
    step: float = 0.1

    def __post_init__(self):
        if self.gamma is None:
            object.__setattr__(self, "gamma", 1.0 / self.carrier)
        for name in ("beat_length", "coupling_length", "step", "carrier", "gamma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        eps = self.fluctuation
        if not 0.0 < eps < 1.0:
            raise ValueError(f"fluctuation must lie in (0, 1), got {eps!r}")
        if abs(eps - 0.5) < REPEATED_ROOT_GAP:
            raise ValueError(
                f"fluctuation={eps!r} is within {REPEATED_ROOT_GAP:g} of 0.5, where the two "
                "filter rates coincide; nudge it (e.g. 0.5 + 2e-6) to approximate this case"
            )

    def f(self, omega):
        """Frequency scaling ``gamma * omega`` of the birefringence."""
        return self.gamma * np.asarray(omega, dtype=float)


@dataclass(frozen=True)
class ModalDecomposition:
    """Filter rates and noise intensity of the birefringence process.

    ``lambda_rms`` is the stationary variance of ``b`` per unit noise
    intensity, so ``sigma2 * lambda_rms`` is the stationary variance of each
    component.
    """

    lambda1: float
    lambda2: float
    lambda_rms: float
    sigma2: float

    @property
    def stationary_variance(self) -> float:
        return self.sigma2 * self.lambda_rms

    def with_sigma2(self, sigma2: float) -> "ModalDecomposition":
        """Copy with the noise intensity overridden (e.g. 0 for a noiseless channel)."""
        if sigma2 < 0:
            raise ValueError("sigma2 must be non-negative")
        return replace(self, sigma2=float(sigma2))


def derive_rates(params: FiberParams) -> ModalDecomposition:
    eps = params.fluctuation
    if abs(eps - 0.5) < REPEATED_ROOT_GAP:
        raise ValueError("fluctuation too close to 0.5; the filter rates are degenerate")
    lf = params.coupling_length
    spread = abs(2.0 * eps - 1.0)
    lam1 = (1.0 - spread) / (2.0 * lf * (1.0 - eps))
    lam2 = (1.0 + spread) / (2.0 * lf * (1.0 - eps))
    lam_rms = (1.0 / (2.0 * lam1) + 1.0 / (2.0 * lam2) - 2.0 / (lam1 + lam2)) / (lam2 - lam1) ** 2
    sigma2 = math.pi**2 / (2.0 * lam_rms * params.beat_length**2)
    return ModalDecomposition(lam1, lam2, lam_rms, sigma2)


@dataclass(frozen=True)
class BirefringenceState:
    """Filter modes of both transverse axes at position ``z``.

    Fields may be scalars or equally shaped arrays (an ensemble of fibers).
    """

    m1x: np.ndarray
    m2x: np.ndarray
    m1y: np.ndarray
    m2y: np.ndarray
    z: float = 0.0

    def b(self, decomp: ModalDecomposition) -> tuple[np.ndarray, np.ndarray]:
        """Reconstruct ``(b_x, b_y)``."""
        gap = decomp.lambda2 - decomp.lambda1
        return (self.m2x - self.m1x) / gap, (self.m2y - self.m1y) / gap


def init_stationary(decomp: ModalDecomposition, rng: np.random.Generator, size=None) -> BirefringenceState:
    """Draw ``b_x(0), b_y(0)`` from the stationary marginal and split them into modes.

    The split ``m_i(0) = lam_i b(0)`` reproduces ``b(0)`` exactly on
    reconstruction. ``size`` gives an ensemble of independent fibers.
    """
    sd = math.sqrt(decomp.stationary_variance)
    bx0 = sd * rng.standard_normal(size)
    by0 = sd * rng.standard_normal(size)
    return state_from_b(decomp, bx0, by0)


def state_from_b(decomp: ModalDecomposition, bx0, by0, z: float = 0.0) -> BirefringenceState:
    l1, l2 = decomp.lambda1, decomp.lambda2
    bx0 = np.asarray(bx0, dtype=float)
    by0 = np.asarray(by0, dtype=float)
    return BirefringenceState(l1 * bx0, l2 * bx0, l1 * by0, l2 * by0, z)


def increment_covariance(decomp: ModalDecomposition, dz: float) -> np.ndarray:
    """Covariance of the noise picked up by the two modes over one step.

    Both modes integrate the same white noise, so the increments are
    correlated.
    """
    l1, l2, s2 = decomp.lambda1, decomp.lambda2, decomp.sigma2
    v1 = s2 * -math.expm1(-2.0 * l1 * dz) / (2.0 * l1)
    v2 = s2 * -math.expm1(-2.0 * l2 * dz) / (2.0 * l2)
    c12 = s2 * -math.expm1(-(l1 + l2) * dz) / (l1 + l2)
    return np.array([[v1, c12], [c12, v2]])


def increment_factor(decomp: ModalDecomposition, dz: float) -> np.ndarray:
    """Lower Cholesky factor of :func:`increment_covariance`.

    Computed in closed form; the second diagonal entry is clamped at zero
    because the modes become almost perfectly correlated as ``dz -> 0``.
    """
    cov = increment_covariance(decomp, dz)
    l11 = math.sqrt(cov[0, 0])
    if l11 == 0.0:
        return np.zeros((2, 2))
    l21 = cov[1, 0] / l11
    l22 = math.sqrt(max(cov[1, 1] - l21 * l21, 0.0))
    return np.array([[l11, 0.0], [l21, l22]])


def step_exact(
    state: BirefringenceState, decomp: ModalDecomposition, dz: float, rng: np.random.Generator, noise=None
) -> BirefringenceState:
    """Advance every filter mode exactly by ``dz``.

    ``noise`` optionally supplies the standard normals, shaped
    ``(2, 2) + shape`` as ``[axis, mode]``; otherwise they are drawn from
    ``rng``.
    """
    if dz <= 0:
        raise ValueError("dz must be positive")
    shape = np.shape(state.m1x)
    if noise is None:
        noise = rng.standard_normal((2, 2) + shape)
    chol = increment_factor(decomp, dz)
    d1 = math.exp(-decomp.lambda1 * dz)
    d2 = math.exp(-decomp.lambda2 * dz)
    eta = np.einsum("ij,ajs->ais", chol, np.reshape(noise, (2, 2, -1))).reshape((2, 2) + shape)
    return BirefringenceState(
        d1 * state.m1x + eta[0, 0],
        d2 * state.m2x + eta[0, 1],
        d1 * state.m1y + eta[1, 0],
        d2 * state.m2y + eta[1, 1],
        state.z + dz,
    )


def sample_trajectory(
    decomp: ModalDecomposition, n_steps: int, dz: float, rng: np.random.Generator, state=None
) -> tuple[np.ndarray, np.ndarray]:
    """Sample ``b_x, b_y`` at ``z_k = k dz`` for ``k = 0 .. n_steps - 1``.

    Equivalent to repeatedly applying :func:`step_exact` (same draws, same
    order), but the linear recursion runs through ``scipy.signal.lfilter``.
    Draw order: the initial state (if not given) then ``(n_steps - 1, 2, 2)``
    normals indexed ``[step, axis, mode]``.
    """
    if state is None:
        state = init_stationary(decomp, rng)
    n_inc = max(n_steps - 1, 0)
    noise = rng.standard_normal((n_inc, 2, 2))
    return trajectory_from_noise(decomp, dz, state, noise)


def trajectory_from_noise(decomp, dz, state, noise):
    """Deterministic part of :func:`sample_trajectory` for given normals."""
    chol = increment_factor(decomp, dz)
    eta = noise @ chol.T  # [step, axis, mode]
    modes = []
    for axis, (m1, m2) in enumerate(((state.m1x, state.m2x), (state.m1y, state.m2y))):
        pair = []
        for mode, (lam, m0) in enumerate(((decomp.lambda1, m1), (decomp.lambda2, m2))):
            decay = math.exp(-lam * dz)
            drive = np.concatenate(([float(m0)], eta[:, axis, mode]))
            pair.append(lfilter([1.0], [1.0, -decay], drive))
        modes.append(pair)
    gap = decomp.lambda2 - decomp.lambda1
    bx = (modes[0][1] - modes[0][0]) / gap
    by = (modes[1][1] - modes[1][0]) / gap
    return bx, by


@dataclass(frozen=True)
class EulerState:
    """``(b, db/dz)`` per axis for the second-order Euler-Maruyama oracle."""

    bx: np.ndarray
    dbx: np.ndarray
    by: np.ndarray
    dby: np.ndarray
    z: float = 0.0


def euler_from_b(decomp: ModalDecomposition, bx0, by0) -> EulerState:
    # slope of the homogeneous filter solution at z = 0
    k = -(decomp.lambda1 + decomp.lambda2)
    bx0 = np.asarray(bx0, dtype=float)
    by0 = np.asarray(by0, dtype=float)
    return EulerState(bx0, k * bx0, by0, k * by0)


def step_euler(state: EulerState, decomp: ModalDecomposition, dz: float, rng: np.random.Generator, noise=None) -> EulerState:
    """Euler-Maruyama step of ``b'' + (lam_1 + lam_2) b' + lam_1 lam_2 b = -g``.

    Only used to cross-check :func:`step_exact`. The position update uses the
    freshly updated slope (semi-implicit), which keeps the scheme stable for
    the allowed step sizes.
    """
    if dz > 1.0 / (10.0 * decomp.lambda2) * (1 + 1e-12):
        raise ValueError(f"dz={dz} too coarse for the Euler oracle; need dz <= 1/(10 lambda2)")
    l1, l2 = decomp.lambda1, decomp.lambda2
    shape = np.shape(state.bx)
    if noise is None:
        noise = rng.standard_normal((2,) + shape)
    kick = math.sqrt(decomp.sigma2 * dz) * np.asarray(noise)
    out = []
    for b, db, xi in ((state.bx, state.dbx, kick[0]), (state.by, state.dby, kick[1])):
        db_new = db + (-(l1 + l2) * db - l1 * l2 * b) * dz - xi
        out.append((b + db_new * dz, db_new))
    return EulerState(out[0][0], out[0][1], out[1][0], out[1][1], state.z + dz)
