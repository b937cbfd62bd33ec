import math

import numpy as np
import pytest

from pmdsim.birefringence import FiberParams, carrier_from_wavelength
from pmdsim.spectra import SpectrumSpec

OMEGA0 = carrier_from_wavelength(1550e-9)
DELTA_OMEGA = 2 * math.pi * 20e9


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def reference_fiber(eps=0.6, **kw):
    return FiberParams(beat_length=20.0, coupling_length=12.0, fluctuation=eps, **kw)


def gaussian(n=65):
    return SpectrumSpec("gaussian", OMEGA0, DELTA_OMEGA, n)


ACCEPTANCE_REPORT = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_REPORT):
        terminalreporter.write_line(line[1])
