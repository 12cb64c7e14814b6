"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one pass/fail line (visible with ``pytest -s`` or on
failure) and asserts the same condition, so the suite is the gate.
Run with ``pytest tests/test_acceptance.py -v``.
"""

import json
import math
import time

import numpy as np
import pytest

from zenosim import (
    BUNDLED_SCENARIOS,
    HamiltonianPath,
    PAULI_X,
    Projector,
    ProjectorPath,
    Waveform,
    bundled_scenario_path,
    convergence_sweep,
    fit_convergence_order,
    integrate_constant,
    integrate_general,
    integrate_rotating_frame,
    load_bundled,
    run_conditional,
    short_time_factorization_check,
)
from zenosim.cli import main
from zenosim.verify import generator_residual

_MODULE_T0 = time.perf_counter()

E10 = Projector.diagonal([1, 0])
PSI0 = np.array([1.0, 0.0], dtype=complex)


def report(num, passed, detail):
    line = f"criterion {num:02d} {'PASS' if passed else 'FAIL'}: {detail}"
    print(line)
    assert passed, line


def freezing():
    hpath = HamiltonianPath.constant(PAULI_X, 1.0)
    ppath = ProjectorPath(E10, horizon=1.0)
    return hpath, ppath


def scenario_runs(name):
    s = load_bundled(name)
    hpath = s.hamiltonian_path()
    ppath = s.projector_path()
    psi0 = s.initial_state_vector()
    return s, hpath, ppath, psi0


def test_criterion_01_zeno_freezing_survival():
    hpath, ppath = freezing()
    t0 = time.perf_counter()
    worst = 0.0
    for n in (10, 100):
        run = run_conditional(hpath, ppath, PSI0, 1.0, n)
        worst = max(worst, abs(run.survival_probability - math.cos(1.0 / n) ** (2 * n)))
    elapsed = time.perf_counter() - t0
    report(
        1,
        worst <= 1e-9 and elapsed < 1.0,
        f"survival vs (cos(1/n))^2n: max |diff| = {worst:.3e} (tol 1e-9), {elapsed:.2f} s",
    )


def test_criterion_02_zeno_limit_order():
    hpath, ppath = freezing()
    vals = []
    for n in (10, 20, 40, 80):
        run = run_conditional(hpath, ppath, PSI0, 1.0, n)
        vals.append(n * (1.0 - run.survival_probability))
    mean = sum(vals) / len(vals)
    spread = max(abs(v - mean) / mean for v in vals)
    report(2, spread <= 0.10, f"n*(1-survival) spread about the mean = {spread:.3%} (tol 10%)")


def test_criterion_03_dragging_identity():
    ok = True
    details = []
    for name in ("dragging", "dragging_with_h"):
        _, hpath, ppath, psi0 = scenario_runs(name)
        t0 = time.perf_counter()
        rec = integrate_general(hpath, ppath, psi0, 1.0, 1000)
        worst = 0.0
        for t, psi in zip(rec.times, rec.states):
            e = ppath.projector_at(float(t)).matrix
            worst = max(worst, float(np.max(np.abs(np.outer(psi, psi.conj()) - e))))
        elapsed = time.perf_counter() - t0
        ok = ok and worst <= 1e-7 and elapsed < 1.0
        details.append(f"{name}: max |psi psi^dag - E| = {worst:.3e}, {elapsed:.2f} s")
    report(3, ok, "; ".join(details) + " (tol 1e-7, < 1 s each)")


def test_criterion_04_stroboscopic_to_effective_convergence():
    _, hpath, ppath, psi0 = scenario_runs("dragging_with_h")
    table = convergence_sweep(hpath, ppath, psi0, 1.0, [25, 50, 100, 200])
    errs = table.state_errors
    monotone = bool(np.all(np.diff(errs) < 0))
    order = fit_convergence_order(table.ns, errs)
    report(
        4,
        monotone and order is not None and order >= 0.9,
        f"state_error {['%.3e' % e for e in errs]} monotone={monotone}, fitted order = {order:.2f} (need >= 0.9)",
    )


def test_criterion_05_route_equivalence():
    _, hpath, ppath, psi0 = scenario_runs("random_d4_rank2")
    gaps = []
    for n in (1000, 2000):
        g = integrate_general(hpath, ppath, psi0, 1.0, n)
        f = integrate_rotating_frame(hpath, ppath, psi0, 1.0, n)
        gaps.append(float(np.linalg.norm(g.final_state - f.final_state)))
    shrink = gaps[0] / gaps[1]
    report(
        5,
        gaps[0] <= 1e-6 and shrink >= 3.0,
        f"final-state gap = {gaps[0]:.3e} (tol 1e-6), shrink on doubling = {shrink:.2f}x (need >= 3)",
    )


def test_criterion_06_gauge_invariance():
    _, hpath, ppath, psi0 = scenario_runs("dragging")
    gauge = HamiltonianPath.linear_combination(
        [(E10.matrix, Waveform.sin(amplitude=1.0, omega=2.0))], horizon=1.0
    )
    transformed = ppath.gauge_transform(gauge, n_probe=50)
    path_dev = max(
        float(np.max(np.abs(ppath.projector_at(float(t)).matrix - transformed.projector_at(float(t)).matrix)))
        for t in np.linspace(0.0, 1.0, 50)
    )
    rec = integrate_general(hpath, ppath, psi0, 1.0, 1000)
    rec_g = integrate_general(hpath, transformed, psi0, 1.0, 1000)
    traj_dev = float(np.max(np.linalg.norm(rec.states - rec_g.states, axis=1)))
    report(
        6,
        path_dev <= 1e-8 and traj_dev <= 1e-8,
        f"projector dev = {path_dev:.3e}, trajectory dev = {traj_dev:.3e} (tol 1e-8)",
    )


def test_criterion_07_hermiticity_and_unitarity():
    worst_herm = worst_norm = worst_conf = 0.0
    for name in BUNDLED_SCENARIOS:
        s, hpath, ppath, psi0 = scenario_runs(name)
        for t in np.linspace(0.0, s.horizon, 100):
            worst_herm = max(worst_herm, generator_residual(hpath, ppath, float(t)))
        rec = integrate_general(hpath, ppath, psi0, s.horizon, s.n_steps)
        worst_norm = max(worst_norm, float(np.max(rec.norm_residual)))
        worst_conf = max(worst_conf, float(np.max(rec.confinement_residual)))
    report(
        7,
        worst_herm <= 1e-9 and worst_norm <= 1e-8 and worst_conf <= 1e-7,
        f"max |K - K^dag| = {worst_herm:.3e} (tol 1e-9), max norm residual = "
        f"{worst_norm:.3e} (tol 1e-8), max confinement = {worst_conf:.3e} (tol 1e-7)",
    )


def test_criterion_08_factorization_scaling():
    rows = short_time_factorization_check(PAULI_X, E10, PSI0, [0.01, 0.005])
    ratio = rows[0][1] / rows[1][1]
    report(8, 3.5 <= ratio <= 4.5, f"defect(0.01)/defect(0.005) = {ratio:.4f} (need in [3.5, 4.5])")


def test_criterion_09_reduction():
    hpath = HamiltonianPath.constant(PAULI_X + 0.5 * np.diag([1.0, -1.0]).astype(complex), 1.0)
    zero_gen = HamiltonianPath.constant(np.zeros((2, 2), dtype=complex), 1.0)
    rec_g = integrate_general(hpath, ProjectorPath(E10, zero_gen), PSI0, 1.0, 1000)
    rec_c = integrate_constant(hpath, E10, PSI0, 1.0, 1000)
    gap = float(np.max(np.linalg.norm(rec_g.states - rec_c.states, axis=1)))
    report(9, gap <= 1e-12, f"general vs constant trajectory gap = {gap:.3e} (tol 1e-12)")


def test_criterion_10_cli_contract(tmp_path):
    verify_ok = all(main(["verify", str(bundled_scenario_path(n))]) == 0 for n in BUNDLED_SCENARIOS)

    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        assert main(["simulate", str(bundled_scenario_path("dragging")), "--engine", "stroboscopic", "--out", str(out)]) == 0
    names = ["dragging_stroboscopic_trajectory.csv", "dragging_stroboscopic_report.json"]
    identical = all((out_a / n).read_bytes() == (out_b / n).read_bytes() for n in names)

    corrupted = json.loads(bundled_scenario_path("dragging").read_text())
    corrupted["base_projector"] = {"diag": [1, 2]}
    bad_path = tmp_path / "corrupted.json"
    bad_path.write_text(json.dumps(corrupted))
    out_c = tmp_path / "c"
    code = main(["simulate", str(bad_path), "--engine", "effective", "--out", str(out_c)])
    no_partials = code == 2 and not out_c.exists()

    elapsed = time.perf_counter() - _MODULE_T0
    report(
        10,
        verify_ok and identical and no_partials and elapsed < 60.0,
        f"verify exit 0 on all bundled = {verify_ok}, byte-identical reruns = {identical}, "
        f"corrupted scenario exit 2 with no files = {no_partials}, "
        f"acceptance module elapsed = {elapsed:.1f} s (< 60 s)",
    )
