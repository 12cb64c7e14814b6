"""Effective evolutions of a pure state under continuous projector measurement.

Three integrators share one stepping scheme (evaluate the generator at the
midpoint of each step, take its exact exponential, apply):

* ``integrate_constant``       -- constant measured projector E; generator
                                  E H(t) E.
* ``integrate_general``        -- moving projector E(t); generator
                                  K(t) = E(t) H(t) E(t) + i [dE/dt, E(t)],
                                  which is Hermitian whenever H is.
* ``integrate_rotating_frame`` -- same dynamics computed in the frame where
                                  the projector is constant: the state is
                                  mapped with U(t)^dagger, the Hamiltonian
                                  becomes U^dagger (H - A) U (the analytic
                                  form of H -> U^dagger H U + i dU^dagger/dt U
                                  for dU/dt = -i A U), the constant-projector
                                  step is taken, and the result is mapped
                                  back with U(t).

Each step is exactly unitary, so the state norm is conserved to roundoff.
Confinement of the state to the measured subspace is recorded, never
enforced: re-projecting would hide exactly the integrator defects the
verification suite is meant to catch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import HermiticityError
from .hamiltonians import HamiltonianPath
from .linalg import Projector, as_state, commutator, expm_skew_hermitian, hermiticity_residual
from .projectors import ProjectorPath

DEFAULT_STEPS_PER_UNIT_TIME = 1000
GENERATOR_HERMITICITY_TOL = 1e-9
INITIAL_CONFINEMENT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EffectiveGenerator:
    """Hermitian generator of the conditioned evolution at one time."""

    t: float
    matrix: np.ndarray


@dataclass(eq=False)
class TrajectoryRecord:
    """Time series of a single integration run.

    states[k] is the state at times[k]; confinement_residual[k] is
    |E(t_k) psi_k - psi_k| and norm_residual[k] is ||psi_k| - 1|.
    """

    times: np.ndarray
    states: np.ndarray
    confinement_residual: np.ndarray
    norm_residual: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        if not (len(self.states) == len(self.confinement_residual) == len(self.norm_residual) == n):
            raise ValueError("trajectory arrays must have equal length")
        if n < 1 or abs(float(self.times[0])) > 1e-12:
            raise ValueError("trajectory must start at t = 0")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def final_time(self) -> float:
        return float(self.times[-1])


@dataclass(frozen=True)
class ConfinementReport:
    max_residual: float
    worst_time: float
    tol: float
    passed: bool


def effective_hamiltonian(
    hpath: HamiltonianPath,
    ppath: ProjectorPath,
    t: float,
    derivative_mode: str = "analytic",
    h_fd: float = 1e-5,
) -> EffectiveGenerator:
    """K(t) = E(t) H(t) E(t) + i [dE/dt, E(t)], validated Hermitian.

    A residual above GENERATOR_HERMITICITY_TOL raises HermiticityError:
    a non-Hermitian generator means the paths are malformed and would
    silently break norm conservation downstream.
    """
    e = ppath.projector_at(t).matrix
    h = hpath.evaluate(t)
    edot = ppath.derivative(t, mode=derivative_mode, h_fd=h_fd)
    k = e @ h @ e + 1j * commutator(edot, e)
    res = hermiticity_residual(k)
    if res > GENERATOR_HERMITICITY_TOL:
        raise HermiticityError(
            f"effective generator at t={t!r} has hermiticity residual "
            f"{res:.3e} > {GENERATOR_HERMITICITY_TOL:.1e}"
        )
    return EffectiveGenerator(t=t, matrix=k)


def _check_initial_confinement(e0: np.ndarray, psi0: np.ndarray) -> None:
    res = float(np.linalg.norm(e0 @ psi0 - psi0))
    if res > INITIAL_CONFINEMENT_TOL:
        raise ValueError(
            f"initial state is not in the measured subspace: |E psi0 - psi0| = {res:.3e}"
        )


def _steps(T: float, n_steps: int) -> float:
    if T <= 0:
        raise ValueError("T must be positive")
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    return T / n_steps


def _record(times, states, projectors, metadata) -> TrajectoryRecord:
    states = np.array(states, dtype=complex)
    conf = np.array(
        [float(np.linalg.norm(e @ psi - psi)) for e, psi in zip(projectors, states)]
    )
    norm = np.abs(np.linalg.norm(states, axis=1) - 1.0)
    return TrajectoryRecord(
        times=np.array(times, dtype=float),
        states=states,
        confinement_residual=conf,
        norm_residual=norm,
        metadata=metadata,
    )


def integrate_constant(
    hpath: HamiltonianPath,
    e: Projector,
    psi0: np.ndarray,
    T: float,
    n_steps: int,
    scenario_id: str | None = None,
) -> TrajectoryRecord:
    """Evolve under the projected generator E H(t) E for a constant projector."""
    h = _steps(T, n_steps)
    psi = as_state(psi0)
    if psi.shape != (e.dim,):
        raise ValueError(f"state dim {psi.shape} does not match projector dim {e.dim}")
    _check_initial_confinement(e.matrix, psi)
    em = e.matrix
    times = [0.0]
    states = [psi]
    for k in range(n_steps):
        gen = em @ hpath.evaluate((k + 0.5) * h) @ em
        psi = expm_skew_hermitian(gen, h) @ psi
        times.append((k + 1) * h)
        states.append(psi)
    meta = {"engine": "constant", "n_steps": n_steps, "scenario": scenario_id}
    return _record(times, states, [em] * len(times), meta)


def integrate_general(
    hpath: HamiltonianPath,
    ppath: ProjectorPath,
    psi0: np.ndarray,
    T: float,
    n_steps: int,
    scenario_id: str | None = None,
    derivative_mode: str = "analytic",
) -> TrajectoryRecord:
    """Evolve with the moving-projector generator K(t) evaluated at midpoints."""
    h = _steps(T, n_steps)
    psi = as_state(psi0)
    if psi.shape != (ppath.dim,):
        raise ValueError(f"state dim {psi.shape} does not match path dim {ppath.dim}")
    _check_initial_confinement(ppath.projector_at(0.0).matrix, psi)
    times = [0.0]
    states = [psi]
    for k in range(n_steps):
        gen = effective_hamiltonian(hpath, ppath, (k + 0.5) * h, derivative_mode=derivative_mode)
        psi = expm_skew_hermitian(gen.matrix, h) @ psi
        times.append((k + 1) * h)
        states.append(psi)
    projectors = [ppath.projector_at(t).matrix for t in times]
    meta = {"engine": "effective", "n_steps": n_steps, "scenario": scenario_id}
    return _record(times, states, projectors, meta)


def integrate_rotating_frame(
    hpath: HamiltonianPath,
    ppath: ProjectorPath,
    psi0: np.ndarray,
    T: float,
    n_steps: int,
    scenario_id: str | None = None,
) -> TrajectoryRecord:
    """Evolve in the co-rotating frame and map back to the lab frame.

    In the frame the measured projector is the constant base E, the
    transformed Hamiltonian is U(t)^dagger (H(t) - A(t)) U(t) with A the
    frame generator, and the recorded states are U(t_k) psi_frame(t_k).
    Equivalent to integrate_general up to the combined stepper error.
    """
    h = _steps(T, n_steps)
    psi = as_state(psi0)
    if psi.shape != (ppath.dim,):
        raise ValueError(f"state dim {psi.shape} does not match path dim {ppath.dim}")
    _check_initial_confinement(ppath.projector_at(0.0).matrix, psi)
    em = ppath.base.matrix
    phi = psi  # frame state; U(0) = 1
    times = [0.0]
    states = [psi]
    for k in range(n_steps):
        tm = (k + 0.5) * h
        u = ppath.unitary_at(tm)
        h_frame = u.conj().T @ (hpath.evaluate(tm) - ppath.generator_at(tm)) @ u
        gen = em @ h_frame @ em
        res = hermiticity_residual(gen)
        if res > GENERATOR_HERMITICITY_TOL:
            raise HermiticityError(
                f"frame generator at t={tm!r} has hermiticity residual {res:.3e}"
            )
        phi = expm_skew_hermitian(gen, h) @ phi
        t_next = (k + 1) * h
        times.append(t_next)
        states.append(ppath.unitary_at(t_next) @ phi)
    projectors = [ppath.projector_at(t).matrix for t in times]
    meta = {"engine": "frame", "n_steps": n_steps, "scenario": scenario_id}
    return _record(times, states, projectors, meta)


def check_confinement(rec: TrajectoryRecord, ppath: ProjectorPath, tol: float) -> ConfinementReport:
    """Recompute max_t |E(t) psi_t - psi_t| over the record and compare to tol."""
    worst = 0.0
    worst_t = float(rec.times[0])
    for t, psi in zip(rec.times, rec.states):
        e = ppath.projector_at(float(t)).matrix
        res = float(np.linalg.norm(e @ psi - psi))
        if res > worst:
            worst, worst_t = res, float(t)
    return ConfinementReport(max_residual=worst, worst_time=worst_t, tol=tol, passed=worst <= tol)
