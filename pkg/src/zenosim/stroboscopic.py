"""Repeated projective measurement interleaved with unitary micro-evolution.

Continuous measurement is modeled stroboscopically: the horizon is split
into n uniform intervals, the state evolves unitarily under the full
Hamiltonian across each interval (a fixed number of exponential substeps),
and the moving projector is measured at the interval end. The initial
condition is validated instead of measured at t = 0.

Two modes share the same precomputed plan:

* conditional -- condition on outcome 1 at every instant and accumulate
  the survival probability (in log space, so large n cannot underflow);
* sampled     -- draw each outcome with its conditional probability,
  continuing in the complementary subspace after a 0, so Monte Carlo
  ensembles get a complete measurement record.

As n grows the conditional state converges to the effective
moving-projector evolution; ``convergence_sweep`` tabulates that limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ImpossibleOutcomeError
from .hamiltonians import HamiltonianPath
from .linalg import PROB_FLOOR, Projector, as_state, expm_skew_hermitian
from .projectors import ProjectorPath
from .dynamics import INITIAL_CONFINEMENT_TOL, integrate_general

DEFAULT_MICRO_SUBSTEPS = 10


@dataclass(eq=False)
class StroboscopicRun:
    """Record of one stroboscopic realization.

    step_probabilities[k] is the probability of the outcome realized at
    times[k] (in conditional mode that outcome is always 1), and
    survival_probability is their product accumulated in log space. The
    outcome sequence and seed are present only in sampled mode.
    """

    n: int
    times: np.ndarray
    step_probabilities: np.ndarray
    survival_probability: float
    conditional_states: np.ndarray
    outcome_sequence: list[int] | None = None
    seed: int | None = None


@dataclass(frozen=True)
class SweepRow:
    n: int
    survival: float
    deficit: float  # 1 - survival
    state_error: float


@dataclass(eq=False)
class SweepTable:
    rows: list[SweepRow]
    reference_steps: int

    @property
    def ns(self) -> np.ndarray:
        return np.array([r.n for r in self.rows])

    @property
    def state_errors(self) -> np.ndarray:
        return np.array([r.state_error for r in self.rows])

    @property
    def deficits(self) -> np.ndarray:
        return np.array([r.deficit for r in self.rows])


class StroboscopicPlan:
    """Per-interval propagators and measurement projectors, computed once.

    The plan depends only on the scenario data, so one plan can serve any
    number of conditional or sampled runs (Monte Carlo ensembles reuse it).
    """

    def __init__(
        self,
        hpath: HamiltonianPath,
        ppath: ProjectorPath,
        T: float,
        n: int,
        micro_substeps: int = DEFAULT_MICRO_SUBSTEPS,
    ):
        if n < 1:
            raise ValueError("need at least one measurement")
        if micro_substeps < 1:
            raise ValueError("micro_substeps must be at least 1")
        if T <= 0:
            raise ValueError("T must be positive")
        if hpath.dim != ppath.dim:
            raise ValueError("Hamiltonian and projector dims do not match")
        self.n = n
        self.dim = ppath.dim
        self.micro_substeps = micro_substeps
        self.times = np.array([(k + 1) * T / n for k in range(n)])
        self.initial_projector = ppath.projector_at(0.0)
        h_micro = T / (n * micro_substeps)
        unitaries = np.empty((n, self.dim, self.dim), dtype=complex)
        for k in range(n):
            t0 = k * T / n
            u = np.eye(self.dim, dtype=complex)
            for j in range(micro_substeps):
                mid = t0 + (j + 0.5) * h_micro
                u = expm_skew_hermitian(hpath.evaluate(mid), h_micro) @ u
            unitaries[k] = u
        unitaries.setflags(write=False)
        self.interval_unitaries = unitaries
        self.projectors = [ppath.projector_at(float(t)) for t in self.times]

    def _condition(self, e: Projector, psi: np.ndarray, keep: bool) -> tuple[np.ndarray, float]:
        """Project onto the kept or complementary subspace and renormalize."""
        phi = e.matrix @ psi
        if not keep:
            phi = psi - phi
        p = float(np.vdot(phi, phi).real)
        if p < PROB_FLOOR:
            raise ImpossibleOutcomeError(
                f"measurement outcome impossible: probability {p:.3e} < {PROB_FLOOR:.1e}"
            )
        return phi / np.sqrt(p), min(p, 1.0)

    def conditional(self, psi0: np.ndarray) -> StroboscopicRun:
        """Condition on the all-1 outcome branch.

        Requires the initial state to lie in the measured subspace; raises
        ImpossibleOutcomeError if any step probability hits the floor.
        """
        psi = as_state(psi0)
        e0 = self.initial_projector.matrix
        res = float(np.linalg.norm(e0 @ psi - psi))
        if res > INITIAL_CONFINEMENT_TOL:
            raise ValueError(
                f"initial state is not in the measured subspace: |E psi0 - psi0| = {res:.3e}"
            )
        probs = np.empty(self.n)
        states = np.empty((self.n, self.dim), dtype=complex)
        log_survival = 0.0
        for k in range(self.n):
            psi = self.interval_unitaries[k] @ psi
            psi, p = self._condition(self.projectors[k], psi, keep=True)
            probs[k] = p
            states[k] = psi
            log_survival += math.log(p)
        return StroboscopicRun(
            n=self.n,
            times=self.times,
            step_probabilities=probs,
            survival_probability=math.exp(log_survival),
            conditional_states=states,
        )

    def sampled(self, psi0: np.ndarray, seed: int) -> StroboscopicRun:
        """Draw one measurement record; deterministic for a given seed.

        Outcome 0 projects onto the complement and the run continues there,
        so the record is complete. step_probabilities hold the realized
        outcome's probability and survival_probability is the likelihood of
        the realized sequence.
        """
        psi = as_state(psi0)
        rng = np.random.default_rng(seed)
        probs = np.empty(self.n)
        states = np.empty((self.n, self.dim), dtype=complex)
        outcomes: list[int] = []
        log_likelihood = 0.0
        for k in range(self.n):
            psi = self.interval_unitaries[k] @ psi
            e = self.projectors[k]
            p_one = float(np.vdot(psi, e.matrix @ psi).real)
            p_one = min(max(p_one, 0.0), 1.0)
            keep = bool(rng.random() < p_one)
            psi, p = self._condition(e, psi, keep=keep)
            outcomes.append(1 if keep else 0)
            probs[k] = p
            states[k] = psi
            log_likelihood += math.log(p)
        return StroboscopicRun(
            n=self.n,
            times=self.times,
            step_probabilities=probs,
            survival_probability=math.exp(log_likelihood),
            conditional_states=states,
            outcome_sequence=outcomes,
            seed=seed,
        )


def run_conditional(
    hpath: HamiltonianPath,
    ppath: ProjectorPath,
    psi0: np.ndarray,
    T: float,
    n: int,
    micro_substeps: int = DEFAULT_MICRO_SUBSTEPS,
) -> StroboscopicRun:
    return StroboscopicPlan(hpath, ppath, T, n, micro_substeps).conditional(psi0)


def run_sampled(
    hpath: HamiltonianPath,
    ppath: ProjectorPath,
    psi0: np.ndarray,
    T: float,
    n: int,
    seed: int,
    micro_substeps: int = DEFAULT_MICRO_SUBSTEPS,
) -> StroboscopicRun:
    return StroboscopicPlan(hpath, ppath, T, n, micro_substeps).sampled(psi0, seed)


def fit_convergence_order(ns, errors) -> float | None:
    """Slope of log(error) against log(1/n); None when the fit is degenerate.

    Degenerate means fewer than two points or an error at roundoff level,
    where a log-log fit would measure noise.
    """
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if ns.size < 2 or np.any(errors <= 1e-14):
        return None
    slope = np.polyfit(np.log(ns), np.log(errors), 1)[0]
    return float(-slope)


def convergence_sweep(
    hpath: HamiltonianPath,
    ppath: ProjectorPath,
    psi0: np.ndarray,
    T: float,
    n_list,
    micro_substeps: int = DEFAULT_MICRO_SUBSTEPS,
    reference_steps: int | None = None,
) -> SweepTable:
    """Tabulate survival and final-state error against the effective dynamics.

    state_error(n) compares the conditional stroboscopic final state with
    integrate_general run at reference_steps (default: at least 1000 steps
    per unit time and 5x the largest n).
    """
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ValueError("n_list must be non-empty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    if reference_steps is None:
        reference_steps = max(int(round(1000 * T)), 5 * max(n_list), 1)
    psi_ref = integrate_general(hpath, ppath, psi0, T, reference_steps).final_state
    rows = []
    for n in n_list:
        run = StroboscopicPlan(hpath, ppath, T, n, micro_substeps).conditional(psi0)
        err = float(np.linalg.norm(run.conditional_states[-1] - psi_ref))
        rows.append(
            SweepRow(
                n=n,
                survival=run.survival_probability,
                deficit=1.0 - run.survival_probability,
                state_error=err,
            )
        )
    return SweepTable(rows=rows, reference_steps=reference_steps)


def short_time_factorization_check(
    h: np.ndarray, e: Projector, psi: np.ndarray, dt_list
) -> list[tuple[float, float]]:
    """Defect |E exp(-i dt h) psi - exp(-i dt E h E) psi| for each dt.

    psi must lie in the measured subspace. The defect scales as dt^2 for
    generic h and vanishes identically when [h, E] = 0.
    """
    psi = as_state(psi)
    if psi.shape != (e.dim,):
        raise ValueError("state dim does not match projector dim")
    res = float(np.linalg.norm(e.matrix @ psi - psi))
    if res > INITIAL_CONFINEMENT_TOL:
        raise ValueError(f"state is not in the measured subspace: residual {res:.3e}")
    compressed = e.matrix @ h @ e.matrix
    rows = []
    for dt in dt_list:
        lhs = e.matrix @ (expm_skew_hermitian(h, dt) @ psi)
        rhs = expm_skew_hermitian(compressed, dt) @ psi
        rows.append((float(dt), float(np.linalg.norm(lhs - rhs))))
    return rows
