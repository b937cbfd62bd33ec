"""Single-photon spectral envelopes and quadrature grids over frequency."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class SpectrumKind(str, Enum):
    GAUSSIAN = "gaussian"
    LORENTZIAN = "lorentzian"
    RECTANGULAR = "rectangular"


GAUSSIAN_HALF_SPAN = 5.0
LORENTZIAN_COVERAGE = 0.999


@dataclass(frozen=True)
class SpectrumSpec:
    """Envelope shape, center ``omega0`` and width ``delta_omega`` (both rad/s)."""

    kind: SpectrumKind
    omega0: float
    delta_omega: float
    n_nodes: int = 65

    def __post_init__(self):
        object.__setattr__(self, "kind", SpectrumKind(self.kind))
        if not self.delta_omega > 0:
            raise ValueError("delta_omega must be positive")
        if not self.omega0 > 0:
            raise ValueError("omega0 must be positive")
        if self.n_nodes < 1 or self.n_nodes % 2 == 0:
            raise ValueError(f"n_nodes must be a positive odd integer, got {self.n_nodes}")


@dataclass(frozen=True)
class SpectralGrid:
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.nodes)


def envelope_density(spec: SpectrumSpec, omega):
    """Spectral probability density ``|phi(omega)|**2`` in s/rad."""
    x = np.asarray(omega, dtype=float) - spec.omega0
    dw = spec.delta_omega
    if spec.kind is SpectrumKind.GAUSSIAN:
        return np.exp(-(x / dw) ** 2) / (dw * math.sqrt(math.pi))
    if spec.kind is SpectrumKind.LORENTZIAN:
        return (dw / math.pi) / (dw**2 + x**2)
    return np.where(np.abs(x) <= dw, 1.0 / (2.0 * dw), 0.0)


def build_grid(spec: SpectrumSpec) -> SpectralGrid:
    """Quadrature nodes and normalized weights for the envelope.

    * Gaussian: uniform nodes over +-5 widths, trapezoid weights.
    * Rectangular: midpoint nodes over the flat top, equal weights.
    * Lorentzian: ``omega0 + dw * tan(theta)`` with ``theta`` on a midpoint
      grid that covers 99.9 % of the mass. The density is uniform in
      ``theta`` so the weights are equal.
    """
    n = spec.n_nodes
    if n < 1 or n % 2 == 0:
        raise ValueError(f"n_nodes must be a positive odd integer, got {n}")
    w0, dw = spec.omega0, spec.delta_omega
    # offsets are built symmetric about 0 so that the grid mean is exactly omega0
    if spec.kind is SpectrumKind.GAUSSIAN:
        if n == 1:
            return SpectralGrid(np.array([w0]), np.array([1.0]))
        offsets = _symmetric(np.linspace(-GAUSSIAN_HALF_SPAN * dw, GAUSSIAN_HALF_SPAN * dw, n))
        trap = np.ones(n)
        trap[[0, -1]] = 0.5
        weights = trap * envelope_density(spec, w0 + offsets)
    elif spec.kind is SpectrumKind.RECTANGULAR:
        offsets = _symmetric(dw * ((np.arange(n) + 0.5) * 2.0 / n - 1.0))
        weights = np.ones(n)
    else:
        delta = 0.5 * math.pi * (1.0 - LORENTZIAN_COVERAGE)
        half = 0.5 * math.pi - delta
        theta = _symmetric(-half + (np.arange(n) + 0.5) * (2.0 * half / n))
        offsets = dw * np.tan(theta)
        weights = np.ones(n)
    weights = _symmetric(weights, odd=False)
    return SpectralGrid(w0 + offsets, weights / weights.sum())


def _symmetric(values, odd=True):
    values = np.asarray(values, dtype=float)
    sign = -1.0 if odd else 1.0
    return 0.5 * (values + sign * values[::-1])
