import math

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import DELTA_OMEGA, OMEGA0
from pmdsim.spectra import SpectrumSpec, build_grid, envelope_density

KINDS = ("gaussian", "lorentzian", "rectangular")


def spec(kind, n=65):
    return SpectrumSpec(kind, OMEGA0, DELTA_OMEGA, n)


def test_peak_values():
    dw = DELTA_OMEGA
    assert envelope_density(spec("gaussian"), OMEGA0) == pytest.approx(1 / (dw * math.sqrt(math.pi)), rel=1e-15)
    assert envelope_density(spec("lorentzian"), OMEGA0) == pytest.approx(1 / (math.pi * dw), rel=1e-15)
    assert envelope_density(spec("rectangular"), OMEGA0 + 1.5 * dw) == 0.0
    assert envelope_density(spec("rectangular"), OMEGA0 + 0.99 * dw) == pytest.approx(1 / (2 * dw))


@pytest.mark.parametrize("kind", KINDS)
def test_density_is_normalized(kind):
    s = spec(kind)
    # integrate in units of the width
    g = lambda x: envelope_density(s, OMEGA0 + x * DELTA_OMEGA) * DELTA_OMEGA  # noqa: E731
    if kind == "lorentzian":
        total = quad(g, -np.inf, np.inf)[0]
    else:
        total = quad(g, -12, 12, points=[-1, 1], limit=200)[0]
    assert total == pytest.approx(1.0, rel=1e-8)


def test_rectangular_weights():
    grid = build_grid(spec("rectangular", 5))
    np.testing.assert_allclose(grid.weights, 0.2, rtol=1e-15)
    np.testing.assert_allclose((grid.nodes - OMEGA0) / DELTA_OMEGA, [-0.8, -0.4, 0, 0.4, 0.8], atol=1e-9)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [1, 3, 65, 129])
def test_weights_normalized_symmetric(kind, n):
    grid = build_grid(spec(kind, n))
    assert np.all(grid.weights > 0)
    assert abs(grid.weights.sum() - 1) < 1e-12
    np.testing.assert_array_equal(grid.weights, grid.weights[::-1])
    offsets = grid.nodes - OMEGA0
    np.testing.assert_allclose(offsets, -offsets[::-1], atol=1e-3)  # rounding at ~1e15 rad/s
    assert grid.nodes[n // 2] == OMEGA0
    assert np.sum(grid.weights * offsets) == pytest.approx(0.0, abs=1e-9 * DELTA_OMEGA)


def test_gaussian_second_moment():
    # |phi|^2 is a normal density of variance dw^2/2; cross-check by quadrature
    exact = quad(lambda x: x**2 * math.exp(-(x**2)) / math.sqrt(math.pi), -np.inf, np.inf)[0]
    assert exact == pytest.approx(0.5, rel=1e-12)
    grid = build_grid(spec("gaussian", 65))
    moment = np.sum(grid.weights * ((grid.nodes - OMEGA0) / DELTA_OMEGA) ** 2)
    assert moment == pytest.approx(exact, rel=1e-3)


def test_lorentzian_mass_coverage():
    n = 65
    grid = build_grid(spec("lorentzian", n))
    theta = np.arctan((grid.nodes - OMEGA0) / DELTA_OMEGA)
    cell = theta[1] - theta[0]
    covered_cells = (theta[-1] + cell / 2 - (theta[0] - cell / 2)) / math.pi
    assert covered_cells >= 0.999
    np.testing.assert_allclose(np.diff(theta), cell, rtol=1e-6)


@pytest.mark.parametrize("n", [0, 2, 64, -3])
def test_rejects_even_or_nonpositive(n):
    with pytest.raises(ValueError):
        spec("gaussian", n)


def test_rejects_bad_width():
    with pytest.raises(ValueError):
        SpectrumSpec("gaussian", OMEGA0, 0.0)
    with pytest.raises(ValueError):
        SpectrumSpec("triangle", OMEGA0, 1.0)
