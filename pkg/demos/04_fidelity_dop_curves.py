"""Fidelity and DOP versus fiber length
====================================

Runs the ``fig1`` (three fluctuation magnitudes) and ``fig3`` (three
spectra) presets at desk scale and prints the
curves. The same runs are available from the command line::

    pmdsim preset fig1 --trials 2000 --out results/
"""

# %%
import sys

from pmdsim.cli import preset_configs
from pmdsim.engine import run_ensemble

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 500

curves = {}
for preset in ("fig1", "fig3"):
    for tag, cfg in preset_configs(preset, trials=trials, seed=1):
        curves[tag] = run_ensemble(cfg)

# %%
z = next(iter(curves.values())).z
print("z (m)  " + "  ".join(f"{t:>18s}" for t in curves))
for j in range(0, len(z), 5):
    print(f"{z[j]:5.0f}  " + "  ".join(f"F={c.fidelity[j]:.3f} D={c.dop[j]:.3f}" for c in curves.values()))

try:
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 3.5))
    for tag, c in curves.items():
        axes[0].errorbar(c.z, c.fidelity, c.se_fidelity, label=tag)
        axes[1].errorbar(c.z, c.dop, c.se_dop, label=tag)
    axes[0].set_ylabel("fidelity")
    axes[1].set_ylabel("DOP")
    for ax in axes:
        ax.set_xlabel("z (m)")
    axes[1].legend(fontsize=7)
    fig.savefig("curves.png", dpi=120, bbox_inches="tight")
except ImportError:
    pass
