"""High-trial reference run for the weak-fluctuation DOP curve.

Runs the ``fig1`` preset fiber at eps = 0.2 with 10000 trials and prints
the largest drop of the degree of polarization below 1. The acceptance
suite freezes this number as the bound for its 2000-trial desk run.

    python demos/dop_drop_oracle.py
"""

import numpy as np

from pmdsim.cli import preset_configs
from pmdsim.engine import run_ensemble

SEED = 20_091_111  # kept apart from the desk-run seed

tag, config = preset_configs("fig2", trials=10_000, seed=SEED)[0]
assert config.fiber.fluctuation == 0.2
result = run_ensemble(config)
drop = 1.0 - result.dop
worst = int(np.argmax(drop))
print(f"{tag}: trials={config.trials} seed={SEED}")
print(f"max DOP drop = {drop[worst]:.6f} at z = {result.z[worst]:.1f} m (se {result.se_dop[worst]:.6f})")
print(f"DOP(z_max) = {result.dop[-1]:.6f} +- {result.se_dop[-1]:.6f}")
