"""Invariant suite run by ``zeno verify`` against one loaded scenario.

Each check returns a CheckResult whose status is one of:

* ``pass`` / ``fail``   -- the invariant was evaluated against its threshold;
* ``skip``              -- the invariant does not apply to this scenario
                           (e.g. dragging needs a rank-1 projector);
* ``precondition``      -- the check could not run because its own
                           precondition failed (distinct from an invariant
                           failure, e.g. a non-commuting gauge generator).

A scenario verifies clean iff every result is pass or skip.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import (
    GENERATOR_HERMITICITY_TOL,
    integrate_constant,
    integrate_general,
    integrate_rotating_frame,
)
from .errors import GaugePreconditionError
from .hamiltonians import HamiltonianPath, Waveform
from .linalg import commutator, hermiticity_residual
from .scenario import Scenario
from .stroboscopic import short_time_factorization_check

CONFINEMENT_TOL = 1e-7
NORM_TOL_RUN = 1e-8
DRAGGING_TOL = 1e-7
GAUGE_AGREE_TOL = 1e-8
ROUTE_GAP_TOL = 1e-6
REDUCTION_TOL = 1e-12
FACTORIZATION_RATIO = (3.5, 4.5)
HERMITICITY_PROBES = 100
GAUGE_PROBES = 50


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # pass | fail | skip | precondition
    detail: str

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "skip")


def _status(passed: bool) -> str:
    return "pass" if passed else "fail"


def generator_residual(hpath, ppath, t: float) -> float:
    e = ppath.projector_at(t).matrix
    edot = ppath.derivative(t)
    k = e @ hpath.evaluate(t) @ e + 1j * commutator(edot, e)
    return hermiticity_residual(k)


def check_hermiticity(scenario: Scenario, hpath, ppath) -> CheckResult:
    worst = 0.0
    for t in np.linspace(0.0, scenario.horizon, HERMITICITY_PROBES):
        worst = max(worst, generator_residual(hpath, ppath, float(t)))
    return CheckResult(
        "hermiticity",
        _status(worst <= GENERATOR_HERMITICITY_TOL),
        f"max |K - K^dagger| = {worst:.3e} over {HERMITICITY_PROBES} probes "
        f"(tol {GENERATOR_HERMITICITY_TOL:.1e})",
    )


def check_trajectory(scenario: Scenario, rec) -> list[CheckResult]:
    conf = float(np.max(rec.confinement_residual))
    norm = float(np.max(rec.norm_residual))
    return [
        CheckResult(
            "confinement",
            _status(conf <= CONFINEMENT_TOL),
            f"max |E psi - psi| = {conf:.3e} over the trajectory (tol {CONFINEMENT_TOL:.1e})",
        ),
        CheckResult(
            "norm-conservation",
            _status(norm <= NORM_TOL_RUN),
            f"max ||psi| - 1| = {norm:.3e} over the trajectory (tol {NORM_TOL_RUN:.1e})",
        ),
    ]


def check_dragging(scenario: Scenario, ppath, rec) -> CheckResult:
    if ppath.rank != 1:
        return CheckResult("dragging", "skip", "projector rank is not 1")
    worst = 0.0
    for t, psi in zip(rec.times, rec.states):
        e = ppath.projector_at(float(t)).matrix
        worst = max(worst, float(np.max(np.abs(np.outer(psi, psi.conj()) - e))))
    return CheckResult(
        "dragging",
        _status(worst <= DRAGGING_TOL),
        f"max |psi psi^dagger - E(t)| = {worst:.3e} (tol {DRAGGING_TOL:.1e})",
    )


def _default_gauge_generator(scenario: Scenario) -> HamiltonianPath:
    """In-subspace phase generator: a sine waveform times the base projector."""
    base = scenario.base_projector_object()
    return HamiltonianPath.linear_combination(
        [(base.matrix, Waveform.sin(amplitude=1.0, omega=2.0))], scenario.horizon
    )


def check_gauge_invariance(scenario: Scenario, hpath, ppath, rec) -> CheckResult:
    gauge = scenario.gauge_generator_path()
    label = "scenario gauge_generator" if gauge is not None else "default in-subspace generator"
    if gauge is None:
        gauge = _default_gauge_generator(scenario)
    try:
        transformed = ppath.gauge_transform(gauge, n_probe=GAUGE_PROBES)
    except GaugePreconditionError as exc:
        return CheckResult("gauge-invariance", "precondition", f"{label}: {exc}")
    path_dev = 0.0
    for t in np.linspace(0.0, scenario.horizon, GAUGE_PROBES):
        path_dev = max(
            path_dev,
            float(
                np.max(
                    np.abs(ppath.projector_at(float(t)).matrix - transformed.projector_at(float(t)).matrix)
                )
            ),
        )
    rec_g = integrate_general(
        hpath, transformed, scenario.initial_state_vector(), scenario.horizon, scenario.n_steps
    )
    traj_dev = float(np.max(np.linalg.norm(rec.states - rec_g.states, axis=1)))
    passed = path_dev <= GAUGE_AGREE_TOL and traj_dev <= GAUGE_AGREE_TOL
    return CheckResult(
        "gauge-invariance",
        _status(passed),
        f"{label}: projector dev {path_dev:.3e}, trajectory dev {traj_dev:.3e} "
        f"(tol {GAUGE_AGREE_TOL:.1e})",
    )


def check_factorization(scenario: Scenario, hpath) -> CheckResult:
    base = scenario.base_projector_object()
    psi0 = scenario.initial_state_vector()
    rows = short_time_factorization_check(hpath.evaluate(0.0), base, psi0, [0.01, 0.005])
    d1, d2 = rows[0][1], rows[1][1]
    if d1 < 1e-13 and d2 < 1e-13:
        return CheckResult(
            "factorization-scaling",
            "pass",
            f"defects {d1:.3e}, {d2:.3e} at roundoff (commuting case)",
        )
    if d2 == 0.0:
        return CheckResult("factorization-scaling", "fail", f"degenerate defects {d1:.3e}, {d2:.3e}")
    ratio = d1 / d2
    lo, hi = FACTORIZATION_RATIO
    return CheckResult(
        "factorization-scaling",
        _status(lo <= ratio <= hi),
        f"defect(0.01)/defect(0.005) = {ratio:.4f} (expected within [{lo}, {hi}])",
    )


def check_route_equivalence(scenario: Scenario, hpath, ppath, rec) -> CheckResult:
    rec_f = integrate_rotating_frame(
        hpath, ppath, scenario.initial_state_vector(), scenario.horizon, scenario.n_steps
    )
    gap = float(np.linalg.norm(rec.final_state - rec_f.final_state))
    return CheckResult(
        "route-equivalence",
        _status(gap <= ROUTE_GAP_TOL),
        f"final-state gap between effective and frame engines = {gap:.3e} "
        f"(tol {ROUTE_GAP_TOL:.1e})",
    )


def check_reduction(scenario: Scenario, hpath, ppath, rec) -> CheckResult:
    if scenario.frame_generator is not None:
        return CheckResult("reduction", "skip", "projector path is not constant")
    rec_c = integrate_constant(
        hpath,
        scenario.base_projector_object(),
        scenario.initial_state_vector(),
        scenario.horizon,
        scenario.n_steps,
    )
    gap = float(np.max(np.linalg.norm(rec.states - rec_c.states, axis=1)))
    return CheckResult(
        "reduction",
        _status(gap <= REDUCTION_TOL),
        f"moving-projector vs constant-projector trajectory gap = {gap:.3e} "
        f"(tol {REDUCTION_TOL:.1e})",
    )


def run_checks(scenario: Scenario) -> list[CheckResult]:
    hpath = scenario.hamiltonian_path()
    ppath = scenario.projector_path()
    psi0 = scenario.initial_state_vector()
    rec = integrate_general(hpath, ppath, psi0, scenario.horizon, scenario.n_steps)
    results = [check_hermiticity(scenario, hpath, ppath)]
    results += check_trajectory(scenario, rec)
    results.append(check_dragging(scenario, ppath, rec))
    results.append(check_gauge_invariance(scenario, hpath, ppath, rec))
    results.append(check_factorization(scenario, hpath))
    results.append(check_route_equivalence(scenario, hpath, ppath, rec))
    results.append(check_reduction(scenario, hpath, ppath, rec))
    return results
