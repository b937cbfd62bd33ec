"""Single-photon polarization decoherence under stochastic polarization mode dispersion."""

__version__ = "0.1.0"

from .birefringence import FiberParams, ModalDecomposition, derive_rates  # noqa: E402
from .engine import CurveResult, EnsembleConfig, run_ensemble, run_trial  # noqa: E402
from .metrics import bloch_vector, dop, fidelity, input_state  # noqa: E402
from .spectra import SpectrumKind, SpectrumSpec, build_grid  # noqa: E402

__all__ = [
    "CurveResult",
    "EnsembleConfig",
    "FiberParams",
    "ModalDecomposition",
    "SpectrumKind",
    "SpectrumSpec",
    "bloch_vector",
    "build_grid",
    "derive_rates",
    "dop",
    "fidelity",
    "input_state",
    "run_ensemble",
    "run_trial",
]
