"""Acceptance gate at desk scale: 2000 trials, z_max = 500 m, dz = 0.1 m.

Each criterion reports one PASS/FAIL line (collected in the terminal summary)
and then asserts. Tolerances are fixed here and never tuned to the outcome.
"""

import math
from dataclasses import replace

import mpmath as mp
import numpy as np
import pytest

from conftest import ACCEPTANCE_REPORT
from pmdsim.birefringence import derive_rates, init_stationary, sample_trajectory
from pmdsim.cli import main, preset_configs
from pmdsim.engine import _Prepared, run_ensemble, single_axis_trajectory, trial_rng
from pmdsim.metrics import bloch_vector, check_density, dop, fidelity, fidelity_eig
from pmdsim.propagation import propagate_integrated, propagate_ordered, trajectory_array

DESK_TRIALS = 2000
SEED = 424242
# max DOP drop of the 10000-trial eps = 0.2 run in demos/dop_drop_oracle.py (seed 20091111)
ORACLE_DOP_DROP_EPS02 = 0.995655

pytestmark = pytest.mark.slow


def report(number, ok, detail):
    ACCEPTANCE_REPORT.append((number, f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"))
    assert ok, detail


def combined(a, b):
    return math.hypot(a, b)


@pytest.fixture(scope="module")
def fig1():
    runs = {}
    for tag, cfg in preset_configs("fig1", trials=DESK_TRIALS, seed=SEED):
        runs[cfg.fiber.fluctuation] = run_ensemble(cfg)
    return runs


@pytest.fixture(scope="module")
def fig3(fig1):
    runs = {"gaussian": fig1[0.6]}
    for tag, cfg in preset_configs("fig3", trials=DESK_TRIALS, seed=SEED)[1:]:
        runs[cfg.spectrum.kind.value] = run_ensemble(cfg)
    return runs


def test_c01_parameter_algebra():
    mp.mp.dps = 50
    worst = 0.0
    worst_identity = 0.0
    for eps in (0.2, 0.6, 0.99):
        cfg = preset_configs("fig1")[0][1]
        fiber = replace(cfg.fiber, fluctuation=eps)
        d = derive_rates(fiber)
        e, lf, lb = mp.mpf(eps), mp.mpf(12), mp.mpf(20)
        l1 = (1 - abs(2 * e - 1)) / (2 * lf * (1 - e))
        l2 = (1 + abs(2 * e - 1)) / (2 * lf * (1 - e))
        rms = (1 / (2 * l1) + 1 / (2 * l2) - 2 / (l1 + l2)) / (l2 - l1) ** 2
        s2 = mp.pi**2 / (2 * rms * lb**2)
        for got, want in ((d.lambda1, l1), (d.lambda2, l2), (d.sigma2, s2)):
            worst = max(worst, float(abs((mp.mpf(got) - want) / want)))
        identity = mp.pi**2 / (2 * lb**2)
        worst_identity = max(worst_identity, float(abs((mp.mpf(d.sigma2 * d.lambda_rms) - identity) / identity)))
    report(1, worst <= 1e-12 and worst_identity <= 1e-12,
           f"max rel error of rates {worst:.2e}, of sigma2*lambda_rms identity {worst_identity:.2e} (tol 1e-12)")


def test_c02_beat_length_consistency():
    cfg = preset_configs("fig1")[1][1]
    d = derive_rates(cfg.fiber)
    s = init_stationary(d, np.random.default_rng(SEED), size=100_000)
    bx, by = s.b(d)
    rms = math.sqrt(np.mean(4 * bx**2 + 4 * by**2))
    target = 2 * math.pi / 20
    rel = abs(rms - target) / target
    report(2, rel < 0.03, f"RMS |b| = {rms:.5f} rad/m vs 2 pi/L_b = {target:.5f} (rel {rel:.3%}, tol 3%)")


def test_c03_unitarity_and_state_health(fig1):
    worst_u = max(r.max_unitarity_error for r in fig1.values())
    problems = []
    for eps, r in fig1.items():
        try:
            check_density(r.rho, atol=1e-10)
        except ValueError as exc:
            problems.append(f"eps={eps}: {exc}")
    report(3, worst_u < 1e-12 and not problems,
           f"max |U^dag U - I| = {worst_u:.2e} (tol 1e-12); density checks: {problems or 'all Hermitian, trace 1, PSD'}")


def test_c04_exact_trivial_channels():
    cfg = preset_configs("fig1", trials=20, seed=SEED)[1][1]
    quiet = run_ensemble(replace(cfg, sigma2_override=0.0))
    dev_quiet = max(np.max(np.abs(quiet.fidelity - 1)), np.max(np.abs(quiet.dop - 1)))
    eig = run_ensemble(replace(cfg, alpha=1 / math.sqrt(2), trials=200), trajectory_fn=single_axis_trajectory)
    dev_eig = np.max(np.abs(eig.fidelity - 1))
    report(4, dev_quiet < 1e-10 and dev_eig < 1e-10,
           f"zero noise max |F-1|,|DOP-1| = {dev_quiet:.2e}; single-axis eigenstate max |F-1| = {dev_eig:.2e} (tol 1e-10)")


def test_c05_fidelity_plateau_and_ordering(fig1):
    r = fig1[0.6]
    n = len(r.z)
    decreases = r.fidelity[-1] < 1 - 3 * r.se_fidelity[-1] and r.fidelity[1] < 1
    tail = slice(int(math.ceil(0.8 * (n - 1))), n)
    plateau = np.abs(r.fidelity[tail] - r.fidelity[tail].mean()) < 3 * r.se_fidelity[tail]
    f = {e: (fig1[e].fidelity[-1], fig1[e].se_fidelity[-1]) for e in fig1}
    gap_hi = f[0.99][0] - f[0.6][0] - 2 * combined(f[0.99][1], f[0.6][1])
    gap_lo = f[0.6][0] - f[0.2][0] - 2 * combined(f[0.6][1], f[0.2][1])
    ok = decreases and plateau.all() and gap_hi > 0 and gap_lo > 0
    values = ", ".join(f"F({e})={v:.4f}+-{s:.4f}" for e, (v, s) in sorted(f.items()))
    report(5, ok,
           f"decreases={decreases}, plateau within 3se={bool(plateau.all())}, at z_max {values}; "
           f"ordering margins {gap_hi:+.4f}, {gap_lo:+.4f} (need > 0)")


def test_c06_dop_weak_fluctuation_and_ordering(fig1):
    r = fig1[0.2]
    drop = 1 - r.dop
    j = int(np.argmax(drop))
    within = drop[j] <= ORACLE_DOP_DROP_EPS02 + 3 * r.se_dop[j]
    d = {e: (fig1[e].dop[-1], fig1[e].se_dop[-1]) for e in fig1}
    gap_lo = d[0.2][0] - d[0.6][0] - 2 * combined(d[0.2][1], d[0.6][1])
    gap_hi = d[0.6][0] - d[0.99][0] - 2 * combined(d[0.6][1], d[0.99][1])
    ok = within and gap_lo > 0 and gap_hi > 0
    values = ", ".join(f"DOP({e})={v:.4f}+-{s:.4f}" for e, (v, s) in sorted(d.items()))
    report(6, ok,
           f"eps=0.2 max drop {drop[j]:.4f} vs oracle bound {ORACLE_DOP_DROP_EPS02:.4f}+3se ({within}); "
           f"at z_max {values}; ordering margins {gap_lo:+.4f}, {gap_hi:+.4f} (need > 0)")


def test_c07_spectrum_shapes(fig3):
    g, lz, rc = fig3["gaussian"], fig3["lorentzian"], fig3["rectangular"]
    lines = []
    ok = True
    for name in ("fidelity", "dop"):
        se = "se_" + name
        for label, other in (("gaussian", g), ("rectangular", rc)):
            margin = getattr(other, name)[-1] - getattr(lz, name)[-1] - 2 * combined(getattr(other, se)[-1], getattr(lz, se)[-1])
            ok &= margin > 0
            lines.append(f"{name} lorentzian below {label} margin {margin:+.4f}")
        diff = np.abs(getattr(g, name) - getattr(rc, name))
        bound = 3 * np.hypot(getattr(g, se), getattr(rc, se))
        same = bool(np.all(diff[1:] < bound[1:])) and diff[0] < 1e-12
        ok &= same
        lines.append(f"{name} gaussian~rectangular {same} (max diff {diff.max():.2e})")
    report(7, ok, "; ".join(lines))


def test_c08_discretization_soundness():
    cfg = preset_configs("fig1", trials=DESK_TRIALS, seed=SEED)[1][1]
    # same noise: the coarse path is every second sample of the fine one
    coarse = run_ensemble(replace(cfg, sampling_refinement=2))
    fine = run_ensemble(replace(cfg, fiber=replace(cfg.fiber, step=cfg.fiber.step / 2)))
    worst = 0.0
    for name in ("fidelity", "dop"):
        se = np.maximum(getattr(coarse, "se_" + name), getattr(fine, "se_" + name))
        diff = np.abs(getattr(coarse, name) - getattr(fine, name))
        worst = max(worst, float(np.max(diff[1:] / se[1:])))
    halving_ok = worst < 2

    d = derive_rates(cfg.fiber)
    bx, by = sample_trajectory(d, 3000, cfg.fiber.step, trial_rng(SEED, 0))
    single = trajectory_array(bx, 0.0, cfg.fiber.step)
    generic = trajectory_array(bx, by, cfg.fiber.step)
    same = max(np.max(np.abs(propagate_ordered(single, f) - propagate_integrated(single, f))) for f in (0.9999, 1.0, 1.0001))
    differ = np.max(np.abs(propagate_ordered(generic, 1.0) - propagate_integrated(generic, 1.0)))

    prep_o = _Prepared(replace(cfg, trials=1))
    prep_i = _Prepared(replace(cfg, trials=1, propagation_mode="integrated"))
    k_same = np.max(np.abs(prep_o.trial(0, single_axis_trajectory)[0] - prep_i.trial(0, single_axis_trajectory)[0]))
    k_differ = np.max(np.abs(prep_o.trial(0)[0] - prep_i.trial(0)[0]))
    ok = halving_ok and same < 1e-12 and k_same < 1e-12 and differ > 1e-3 and k_differ > 1e-3
    report(8, ok,
           f"step halving max |diff|/se = {worst:.3f} (< 2); single-axis ordered vs integrated {same:.1e} / engine {k_same:.1e} "
           f"(< 1e-12); generic {differ:.3f} / engine {k_differ:.3f} (> 1e-3)")


def test_c09_metric_oracles():
    rng = np.random.default_rng(SEED)

    def rand_rho():
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        rho = g @ g.conj().T
        return rho / np.trace(rho).real

    pairs = [(rand_rho(), rand_rho()) for _ in range(1000)]
    worst_f = max(abs(fidelity(a, b) - fidelity_eig(a, b)) for a, b in pairs)
    stack = np.array([a for a, _ in pairs])
    worst_d = float(np.max(np.abs(dop(stack) - np.linalg.norm(bloch_vector(stack), axis=-1))))
    report(9, worst_f < 1e-10 and worst_d < 1e-12,
           f"closed-form vs eigen fidelity {worst_f:.2e} (tol 1e-10); dop vs Bloch norm {worst_d:.2e} (tol 1e-12)")


def test_c10_reproducibility(tmp_path):
    import json

    doc = {"beat_length": 20, "coupling_length": 12, "fluctuation": 0.6, "alpha": 0.707, "delta_f_ghz": 20, "trials": 200}
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(doc))
    blobs = []
    for threads in (1, 4, 8):
        out = tmp_path / f"t{threads}.csv"
        assert main(["run", str(cfg), "--seed", "42", "--threads", str(threads), "--out", str(out)]) == 0
        blobs.append(out.read_bytes())
    same = all(b == blobs[0] for b in blobs)
    report(10, same, f"CSV bytes identical across 1, 4, 8 threads: {same}")
