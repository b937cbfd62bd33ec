"""Run-configuration files and curve export (CSV / JSON).

Configuration files are JSON objects with flat keys. Physical quantities are
SI (meters, rad/s) and a few convenience keys are accepted:

``wavelength_nm``
    carrier given as a vacuum wavelength instead of ``carrier`` (rad/s).
``delta_f_ghz``
    spectral width in GHz; turned into rad/s according to
    ``delta_omega_convention`` (``"angular"`` multiplies by ``2 pi``,
    ``"raw"`` uses ``1e9 * delta_f_ghz`` directly).

A JSON result document can be fed back as a configuration: its ``config``
member holds the fully resolved keys.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .birefringence import FiberParams, carrier_from_wavelength
from .engine import CurveResult, EnsembleConfig
from .spectra import SpectrumSpec

CSV_HEADER = "z_m,fidelity,se_fidelity,dop,se_dop"

REQUIRED = ("beat_length", "coupling_length", "fluctuation")
KNOWN = {
    "beat_length", "coupling_length", "fluctuation", "carrier", "wavelength_nm", "gamma", "step",
    "spectrum", "delta_omega", "delta_f_ghz", "delta_omega_convention", "n_nodes",
    "alpha", "beta", "trials", "z_max", "z_checkpoints", "seed", "propagation_mode", "kappa",
    "sigma2_override", "sampling_refinement", "output", "format",
}


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field or line."""


def _number(doc, key, kind=float):
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{key}': expected a number, got {value!r}")
    if kind is int:
        if float(value) != int(value):
            raise ConfigError(f"field '{key}': expected an integer, got {value!r}")
        return int(value)
    return float(value)


def parse_config(doc: dict) -> EnsembleConfig:
    """Build an :class:`EnsembleConfig` from a flat dictionary."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    if "config" in doc and isinstance(doc["config"], dict):
        doc = doc["config"]
    unknown = sorted(set(doc) - KNOWN)
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(unknown)}")
    for key in REQUIRED:
        if key not in doc:
            raise ConfigError(f"missing required field '{key}'")

    if "carrier" in doc and "wavelength_nm" in doc:
        raise ConfigError("give either 'carrier' or 'wavelength_nm', not both")
    if "carrier" in doc:
        carrier = _number(doc, "carrier")
    else:
        wavelength = _number(doc, "wavelength_nm") if "wavelength_nm" in doc else 1550.0
        if wavelength <= 0:
            raise ConfigError("field 'wavelength_nm': must be positive")
        carrier = carrier_from_wavelength(wavelength * 1e-9)

    convention = doc.get("delta_omega_convention", "angular")
    if convention not in ("angular", "raw"):
        raise ConfigError("field 'delta_omega_convention': expected 'angular' or 'raw'")
    if "delta_omega" in doc and "delta_f_ghz" in doc:
        raise ConfigError("give either 'delta_omega' or 'delta_f_ghz', not both")
    if "delta_omega" in doc:
        delta_omega = _number(doc, "delta_omega")
    else:
        ghz = _number(doc, "delta_f_ghz") if "delta_f_ghz" in doc else 20.0
        delta_omega = ghz * 1e9 * (2.0 * math.pi if convention == "angular" else 1.0)

    beta = doc.get("beta")
    if beta is not None:
        if isinstance(beta, (list, tuple)) and len(beta) == 2:
            beta = complex(float(beta[0]), float(beta[1]))
        elif isinstance(beta, (int, float)) and not isinstance(beta, bool):
            beta = complex(beta)
        else:
            raise ConfigError("field 'beta': expected a number or [real, imag]")

    try:
        fiber = FiberParams(
            beat_length=_number(doc, "beat_length"),
            coupling_length=_number(doc, "coupling_length"),
            fluctuation=_number(doc, "fluctuation"),
            carrier=carrier,
            gamma=_number(doc, "gamma") if doc.get("gamma") is not None else None,
            step=_number(doc, "step") if "step" in doc else 0.1,
        )
        spectrum = SpectrumSpec(
            kind=str(doc.get("spectrum", "gaussian")).lower(),
            omega0=carrier,
            delta_omega=delta_omega,
            n_nodes=_number(doc, "n_nodes", int) if "n_nodes" in doc else 65,
        )
        return EnsembleConfig(
            fiber=fiber,
            spectrum=spectrum,
            alpha=_number(doc, "alpha") if "alpha" in doc else 0.707,
            beta=beta,
            trials=_number(doc, "trials", int) if "trials" in doc else 2000,
            z_max=_number(doc, "z_max") if "z_max" in doc else 500.0,
            z_checkpoints=_number(doc, "z_checkpoints", int) if "z_checkpoints" in doc else 50,
            master_seed=_number(doc, "seed", int) if "seed" in doc else 0,
            propagation_mode=doc.get("propagation_mode", "ordered"),
            kappa=_number(doc, "kappa") if "kappa" in doc else 1.0,
            sigma2_override=_number(doc, "sigma2_override") if doc.get("sigma2_override") is not None else None,
            sampling_refinement=_number(doc, "sampling_refinement", int) if "sampling_refinement" in doc else 1,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> tuple[EnsembleConfig, dict]:
    """Read a JSON config file; returns the parsed config and the raw document."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_config(doc), doc


def config_to_dict(config: EnsembleConfig) -> dict:
    """Fully resolved flat form; :func:`parse_config` inverts it exactly."""
    fiber, spec = config.fiber, config.spectrum
    beta = config.beta
    return {
        "beat_length": fiber.beat_length,
        "coupling_length": fiber.coupling_length,
        "fluctuation": fiber.fluctuation,
        "carrier": fiber.carrier,
        "gamma": fiber.gamma,
        "step": fiber.step,
        "spectrum": spec.kind.value,
        "delta_omega": spec.delta_omega,
        "n_nodes": spec.n_nodes,
        "alpha": config.alpha,
        "beta": None if beta is None else [complex(beta).real, complex(beta).imag],
        "trials": config.trials,
        "z_max": config.z_max,
        "z_checkpoints": config.z_checkpoints,
        "seed": config.master_seed,
        "propagation_mode": config.propagation_mode,
        "kappa": config.kappa,
        "sigma2_override": config.sigma2_override,
        "sampling_refinement": config.sampling_refinement,
    }


def _fmt(x: float) -> str:
    return f"{x:.8e}"


def curve_csv(result: CurveResult) -> str:
    lines = [CSV_HEADER]
    for row in zip(result.z, result.fidelity, result.se_fidelity, result.dop, result.se_dop):
        lines.append(",".join(_fmt(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def curve_json(result: CurveResult) -> dict:
    return {
        "config": config_to_dict(result.config),
        "seed": result.seed,
        "version": result.version,
        "max_unitarity_error": result.max_unitarity_error,
        "z_m": result.z.tolist(),
        "fidelity": result.fidelity.tolist(),
        "se_fidelity": result.se_fidelity.tolist(),
        "dop": result.dop.tolist(),
        "se_dop": result.se_dop.tolist(),
    }


def write_curve(result: CurveResult, path, fmt: str = "csv") -> Path:
    path = Path(path)
    if fmt == "csv":
        text = curve_csv(result)
    elif fmt == "json":
        text = json.dumps(curve_json(result), indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    path.write_text(text, encoding="utf-8")
    return path


def read_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
