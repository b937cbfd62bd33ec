"""Monte Carlo ensemble over fibers, fiber positions and frequency nodes.

Trials are split into a fixed number of contiguous batches (also the
jackknife groups). Batches can run on any number of threads; each batch sums
its trials in index order and the batch sums are combined in batch order, so
results do not depend on the thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from ._kernel import evolve_outer_products
from .birefringence import FiberParams, ModalDecomposition, derive_rates, sample_trajectory
from .metrics import dop, fidelity, input_state, reduce_density
from .spectra import SpectralGrid, SpectrumSpec, build_grid

JACKKNIFE_BATCHES = 20
MODES = ("ordered", "integrated")

TrajectoryFn = Callable[[ModalDecomposition, int, float, np.random.Generator], tuple]


@dataclass(frozen=True)
class EnsembleConfig:
    """Everything that defines one fidelity/DOP curve.

    ``z_checkpoints`` counts intervals: curves are reported at
    ``z_j = j * z_max / z_checkpoints`` for ``j = 0 .. z_checkpoints``.

    ``sampling_refinement = r`` samples the birefringence on a grid ``r``
    times finer than ``fiber.step`` and keeps every ``r``-th sample. The
    exact sampler makes this a valid trajectory at ``fiber.step``; it lets a
    run at ``dz`` share its noise with a run at ``dz / r``.
    """

    fiber: FiberParams
    spectrum: SpectrumSpec
    alpha: float = 0.707
    beta: complex | None = None
    trials: int = 2000
    z_max: float = 500.0
    z_checkpoints: int = 50
    master_seed: int = 0
    propagation_mode: str = "ordered"
    kappa: float = 1.0
    sigma2_override: float | None = None
    sampling_refinement: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.z_checkpoints < 2:
            raise ValueError("z_checkpoints must be >= 2")
        if not self.z_max > 0:
            raise ValueError("z_max must be positive")
        if self.propagation_mode not in MODES:
            raise ValueError(f"propagation_mode must be one of {MODES}")
        if self.kappa not in (1.0, 0.5):
            raise ValueError("kappa must be 1 or 0.5")
        if self.sampling_refinement < 1:
            raise ValueError("sampling_refinement must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        input_state(self.alpha, self.beta)
        self.stride  # validates the checkpoint grid

    @property
    def n_steps(self) -> int:
        n = self.z_max / self.fiber.step
        if abs(n - round(n)) > 1e-9 * max(n, 1.0):
            raise ValueError("z_max must be an integer multiple of the step")
        return int(round(n))

    @property
    def stride(self) -> int:
        n = self.n_steps
        if n % self.z_checkpoints:
            raise ValueError("checkpoint spacing must be an integer multiple of the step")
        return n // self.z_checkpoints

    @property
    def z(self) -> np.ndarray:
        return np.arange(self.z_checkpoints + 1) * (self.stride * self.fiber.step)

    def decomposition(self) -> ModalDecomposition:
        decomp = derive_rates(self.fiber)
        if self.sigma2_override is not None:
            decomp = decomp.with_sigma2(self.sigma2_override)
        return decomp


@dataclass
class CurveResult:
    z: np.ndarray
    fidelity: np.ndarray
    se_fidelity: np.ndarray
    dop: np.ndarray
    se_dop: np.ndarray
    rho: np.ndarray
    config: EnsembleConfig
    max_unitarity_error: float = 0.0
    version: str = __version__
    extra: dict = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return self.config.master_seed


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent counter-based stream for one trial."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.Philox(seq))


def default_trajectory(decomp, n_steps, dz, rng, refinement=1):
    bx, by = sample_trajectory(decomp, n_steps * refinement, dz / refinement, rng)
    return bx[::refinement], by[::refinement]


class _Prepared:
    """Per-config constants shared by all trials."""

    def __init__(self, config: EnsembleConfig):
        self.config = config
        self.decomp = config.decomposition()
        self.grid: SpectralGrid = build_grid(config.spectrum)
        self.f = np.ascontiguousarray(config.fiber.f(self.grid.nodes))
        self.a0, self.rho_in = input_state(config.alpha, config.beta)

    def trial(self, index, trajectory_fn=None):
        cfg = self.config
        rng = trial_rng(cfg.master_seed, index)
        if trajectory_fn is None:
            bx, by = default_trajectory(self.decomp, cfg.n_steps, cfg.fiber.step, rng, cfg.sampling_refinement)
        else:
            bx, by = trajectory_fn(self.decomp, cfg.n_steps, cfg.fiber.step, rng)
        bx = np.ascontiguousarray(bx, dtype=float)
        by = np.ascontiguousarray(by, dtype=float)
        if bx.shape != (cfg.n_steps,) or by.shape != (cfg.n_steps,):
            raise ValueError(f"trajectory must have {cfg.n_steps} samples per axis")
        return evolve_outer_products(
            bx, by, cfg.fiber.step, self.f, float(cfg.kappa), self.a0, cfg.stride,
            cfg.propagation_mode == "ordered",
        )


def run_trial(config: EnsembleConfig, trial_index: int, trajectory_fn: TrajectoryFn | None = None) -> np.ndarray:
    """Outer products ``(U psi_0)(U psi_0)^dagger`` shaped ``(n_z, n_omega, 2, 2)``.

    All frequency nodes share one birefringence trajectory; node ``k`` sees it
    scaled by ``gamma * omega_k``. ``trajectory_fn(decomp, n_steps, dz, rng)``
    replaces the stochastic sampler (e.g. to force a fixed trajectory).
    """
    out, _ = _Prepared(config).trial(trial_index, trajectory_fn)
    return out


def batch_bounds(trials: int) -> list[tuple[int, int]]:
    n_batches = min(JACKKNIFE_BATCHES, trials)
    edges = [b * trials // n_batches for b in range(n_batches + 1)]
    return list(zip(edges[:-1], edges[1:]))


def _run_batch(prep: _Prepared, bounds, trajectory_fn):
    start, stop = bounds
    total = None
    worst = 0.0
    for index in range(start, stop):
        out, dev = prep.trial(index, trajectory_fn)
        total = out.copy() if total is None else total + out
        worst = max(worst, dev)
    return total, worst


def _curves(prep: _Prepared, mean_outer):
    rho = reduce_density(mean_outer, prep.grid)
    return rho, fidelity(prep.rho_in, rho), dop(rho)


def run_ensemble(config: EnsembleConfig, threads: int = 1, trajectory_fn: TrajectoryFn | None = None) -> CurveResult:
    """Average over trials, reduce over frequency and evaluate the curves.

    Standard errors are delete-one-batch jackknife estimates over (up to) 20
    contiguous trial batches.
    """
    prep = _Prepared(config)
    bounds = batch_bounds(config.trials)
    work = lambda b: _run_batch(prep, b, trajectory_fn)  # noqa: E731
    if threads <= 1:
        parts = [work(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, bounds))

    sums = [p[0] for p in parts]
    counts = [stop - start for start, stop in bounds]
    total = sums[0].copy()
    for s in sums[1:]:
        total += s
    n = config.trials
    rho, fid, deg = _curves(prep, total / n)

    n_b = len(bounds)
    if n_b > 1:
        jack_f = np.empty((n_b,) + fid.shape)
        jack_d = np.empty_like(jack_f)
        for b, (s, m) in enumerate(zip(sums, counts)):
            _, jack_f[b], jack_d[b] = _curves(prep, (total - s) / (n - m))
        scale = (n_b - 1) / n_b
        se_f = np.sqrt(scale * np.sum((jack_f - jack_f.mean(0)) ** 2, axis=0))
        se_d = np.sqrt(scale * np.sum((jack_d - jack_d.mean(0)) ** 2, axis=0))
    else:
        se_f = np.zeros_like(fid)
        se_d = np.zeros_like(deg)

    return CurveResult(
        z=config.z,
        fidelity=fid,
        se_fidelity=se_f,
        dop=deg,
        se_dop=se_d,
        rho=rho,
        config=config,
        max_unitarity_error=max(p[1] for p in parts),
    )


def constant_trajectory(bx: float, by: float = 0.0) -> TrajectoryFn:
    """Trajectory hook holding the birefringence fixed along the fiber."""

    def fn(decomp, n_steps, dz, rng):
        return np.full(n_steps, float(bx)), np.full(n_steps, float(by))

    return fn


def single_axis_trajectory(decomp, n_steps, dz, rng):
    """Stochastic ``b_x`` with ``b_y`` switched off (commuting generators)."""
    bx, _ = sample_trajectory(decomp, n_steps, dz, rng)
    return bx, np.zeros(n_steps)


def standard_errors_ratio(small: CurveResult, large: CurveResult, skip_first: int = 1) -> float:
    """Median ratio of fidelity standard errors between two ensemble sizes."""
    a = small.se_fidelity[skip_first:]
    b = large.se_fidelity[skip_first:]
    mask = b > 0
    return float(np.median(a[mask] / b[mask]))


__all__ = [
    "CurveResult",
    "EnsembleConfig",
    "batch_bounds",
    "constant_trajectory",
    "run_ensemble",
    "run_trial",
    "single_axis_trajectory",
    "trial_rng",
]
