"""Command line front end: ``pmdsim run`` and ``pmdsim preset``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .engine import EnsembleConfig, run_ensemble
from .io import ConfigError, config_to_dict, load_config, parse_config, write_curve

REFERENCE_FIBER = {"beat_length": 20.0, "coupling_length": 12.0, "alpha": 0.707, "delta_f_ghz": 20.0}
PRESETS = {
    "fig1": [{"fluctuation": e, "spectrum": "gaussian"} for e in (0.2, 0.6, 0.99)],
    "fig3": [{"fluctuation": 0.6, "spectrum": s} for s in ("gaussian", "lorentzian", "rectangular")],
}
PRESETS["fig2"] = PRESETS["fig1"]
PRESETS["fig4"] = PRESETS["fig3"]
PRESET_TRIALS = 10_000


def preset_configs(name: str, trials: int = PRESET_TRIALS, seed: int = 0) -> list[tuple[str, EnsembleConfig]]:
    """Tagged configurations of one figure preset (all share the seed)."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset '{name}' (choose from {', '.join(sorted(PRESETS))})")
    runs = []
    for entry in PRESETS[name]:
        doc = {**REFERENCE_FIBER, **entry, "trials": trials, "seed": seed}
        tag = f"eps{entry['fluctuation']:g}" if name in ("fig1", "fig2") else entry["spectrum"]
        runs.append((f"{name}_{tag}", parse_config(doc)))
    return runs


def _apply_overrides(config: EnsembleConfig, args) -> EnsembleConfig:
    changes = {}
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.trials is not None:
        changes["trials"] = args.trials
    try:
        return replace(config, **changes) if changes else config
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_run(args) -> int:
    config, doc = load_config(args.config)
    config = _apply_overrides(config, args)
    fmt = args.format or doc.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"field 'format': expected 'csv' or 'json', got {fmt!r}")
    out = args.out or doc.get("output") or f"curve.{fmt}"
    result = run_ensemble(config, threads=args.threads)
    write_curve(result, out, fmt)
    print(f"wrote {out}", file=sys.stderr)
    return 0


def cmd_preset(args) -> int:
    runs = preset_configs(args.name, args.trials or PRESET_TRIALS, args.seed or 0)
    fmt = args.format or "csv"
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {"preset": args.name, "version": __version__, "runs": []}
    for tag, config in runs:
        result = run_ensemble(config, threads=args.threads)
        path = write_curve(result, out_dir / f"{tag}.{fmt}", fmt)
        manifest["runs"].append({
            "file": path.name,
            "fluctuation": config.fiber.fluctuation,
            "spectrum": config.spectrum.kind.value,
            "config": config_to_dict(config),
        })
        print(f"wrote {path}", file=sys.stderr)
    (out_dir / f"{args.name}_manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pmdsim", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, help="master seed (64-bit)")
        p.add_argument("--trials", type=int, help="number of Monte Carlo trials")
        p.add_argument("--threads", type=int, default=1, help="worker threads; output does not depend on it")
        p.add_argument("--out", help="output file (run) or directory (preset)")
        p.add_argument("--format", choices=("csv", "json"))

    run = sub.add_parser("run", help="run one ensemble from a JSON config file")
    run.add_argument("config", help="JSON configuration (or a previous JSON result)")
    common(run)
    run.set_defaults(func=cmd_run)

    preset = sub.add_parser("preset", help="reproduce one of the figure parameter sets")
    preset.add_argument("name", choices=sorted(PRESETS))
    common(preset)
    preset.set_defaults(func=cmd_preset)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"pmdsim: config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"pmdsim: run failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
