"""Rotating measured-projector paths.

A projector path conjugates a base projector E by a time-ordered unitary:
U(t) solves dU/dt = -i A(t) U from U(0) = 1 for a Hermitian generator path
A, and the measured projector at time t is E(t) = U(t) E U(t)^dagger. The
unitary is propagated with a midpoint-exponential stepper on a fixed
substep grid (exact for constant generators, second order otherwise), and
checkpoints are cached eagerly so evaluation is deterministic and
independent of query order.

Many unitary paths generate the same projector path: composing U with any
unitary factor whose generator commutes with E leaves E(t) unchanged.
``gauge_transform`` appends such a factor, which downstream dynamics must
not be able to see.
"""

from __future__ import annotations

import numpy as np

from .errors import GaugePreconditionError
from .hamiltonians import HamiltonianPath
from .linalg import Projector, commutator, expm_skew_hermitian

DEFAULT_SUBSTEP_FRACTION = 1e-3  # frame substep as a fraction of the horizon
PROPAGATED_PROJECTOR_TOL = 1e-8  # projector validation after propagation
GAUGE_COMMUTE_TOL = 1e-10
RANK_THRESHOLD = 0.5  # eigenvalue cut separating occupied from empty


class _Propagator:
    """Checkpointed midpoint-exponential solution of dU/dt = -i A(t) U."""

    def __init__(self, generator: HamiltonianPath, substep_fraction: float):
        if not 0 < substep_fraction <= 1:
            raise ValueError("substep fraction must be in (0, 1]")
        self.generator = generator
        self.horizon = generator.horizon
        self.n_cells = max(1, int(round(1.0 / substep_fraction)))
        self.stride = self.horizon / self.n_cells
        d = generator.dim
        checkpoints = np.empty((self.n_cells + 1, d, d), dtype=complex)
        checkpoints[0] = np.eye(d, dtype=complex)
        for k in range(self.n_cells):
            mid = (k + 0.5) * self.stride
            step = expm_skew_hermitian(generator.evaluate(mid), self.stride)
            checkpoints[k + 1] = step @ checkpoints[k]
        checkpoints.setflags(write=False)
        self._checkpoints = checkpoints

    def at(self, t: float) -> np.ndarray:
        """Unitary at time t: cached checkpoint plus at most one partial step."""
        slack = 1e-12 * max(1.0, self.horizon)
        if t < -slack or t > self.horizon + slack:
            raise ValueError(f"time {t!r} outside horizon [0, {self.horizon!r}]")
        t = min(max(t, 0.0), self.horizon)
        k = min(int(t / self.stride), self.n_cells)
        rem = t - k * self.stride
        if rem <= slack:
            return self._checkpoints[k]
        mid = k * self.stride + rem / 2.0
        return expm_skew_hermitian(self.generator.evaluate(mid), rem) @ self._checkpoints[k]


class ProjectorPath:
    """Time-dependent projector E(t) = U(t) E U(t)^dagger on [0, horizon].

    With ``generator=None`` the path is constant (U(t) = 1 exactly) and
    ``horizon`` must be given; otherwise the horizon comes from the
    generator path.
    """

    def __init__(
        self,
        base: Projector,
        generator: HamiltonianPath | None = None,
        *,
        horizon: float | None = None,
        substep_fraction: float = DEFAULT_SUBSTEP_FRACTION,
    ):
        if not isinstance(base, Projector):
            base = Projector.from_matrix(base)
        self._base = base
        self._substep_fraction = substep_fraction
        if generator is None:
            if horizon is None or horizon <= 0:
                raise ValueError("a constant projector path needs a positive horizon")
            self._horizon = float(horizon)
            self._stages: tuple[_Propagator, ...] = ()
        else:
            if generator.dim != base.dim:
                raise ValueError(
                    f"generator dim {generator.dim} does not match projector dim {base.dim}"
                )
            if horizon is not None and abs(horizon - generator.horizon) > 1e-12:
                raise ValueError("horizon argument conflicts with the generator horizon")
            self._horizon = generator.horizon
            self._stages = (_Propagator(generator, substep_fraction),)

    @classmethod
    def _with_stages(cls, base, horizon, substep_fraction, stages) -> "ProjectorPath":
        path = cls.__new__(cls)
        path._base = base
        path._horizon = horizon
        path._substep_fraction = substep_fraction
        path._stages = stages
        return path

    @property
    def base(self) -> Projector:
        return self._base

    @property
    def dim(self) -> int:
        return self._base.dim

    @property
    def rank(self) -> int:
        return self._base.rank

    @property
    def horizon(self) -> float:
        return self._horizon

    def unitary_at(self, t: float) -> np.ndarray:
        """Rotation U(t); the ordered product of all stage propagators.

        Every factor is an exact exponential, so unitarity degrades only by
        roundoff accumulation over the substeps (measured below 1e-12 for
        the default grid).
        """
        if not self._stages:
            self._check_time(t)
            return np.eye(self.dim, dtype=complex)
        u = self._stages[0].at(t)
        for stage in self._stages[1:]:
            u = u @ stage.at(t)
        return u

    def _check_time(self, t: float) -> None:
        slack = 1e-12 * max(1.0, self._horizon)
        if t < -slack or t > self._horizon + slack:
            raise ValueError(f"time {t!r} outside horizon [0, {self._horizon!r}]")

    def generator_at(self, t: float) -> np.ndarray:
        """Effective Hermitian generator of the composed rotation at time t.

        For stages U_1 U_2 ... this is A_1 + W_1 A_2 W_1^dagger + ... with
        W_j the product of the stages before stage j.
        """
        if not self._stages:
            self._check_time(t)
            return np.zeros((self.dim, self.dim), dtype=complex)
        total = self._stages[0].generator.evaluate(t).copy()
        if len(self._stages) > 1:
            w = self._stages[0].at(t)
            for stage in self._stages[1:]:
                total += w @ stage.generator.evaluate(t) @ w.conj().T
                w = w @ stage.at(t)
        return total

    def projector_at(self, t: float) -> Projector:
        """E(t) = U(t) E U(t)^dagger, symmetrized and validated."""
        if not self._stages:
            self._check_time(t)
            return self._base
        u = self.unitary_at(t)
        x = u @ self._base.matrix @ u.conj().T
        return Projector.from_matrix((x + x.conj().T) / 2.0, tol=PROPAGATED_PROJECTOR_TOL)

    def derivative(self, t: float, mode: str = "analytic", h_fd: float = 1e-5) -> np.ndarray:
        """Time derivative of the projector path at t.

        ``analytic`` uses the exact identity dE/dt = -i [A(t), E(t)] that
        conjugated projectors satisfy; ``finite_difference`` uses a central
        stencil of width h_fd (one-sided at the horizon endpoints) and is
        the cross-check for sampled or opaque frames.
        """
        if mode == "analytic":
            return -1j * commutator(self.generator_at(t), self.projector_at(t).matrix)
        if mode != "finite_difference":
            raise ValueError(f"unknown derivative mode {mode!r}")
        if h_fd <= 0:
            raise ValueError("h_fd must be positive")
        self._check_time(t)
        lo, hi = t - h_fd, t + h_fd
        if lo < 0.0:
            return (self.projector_at(t + h_fd).matrix - self.projector_at(t).matrix) / h_fd
        if hi > self._horizon:
            return (self.projector_at(t).matrix - self.projector_at(t - h_fd).matrix) / h_fd
        return (self.projector_at(hi).matrix - self.projector_at(lo).matrix) / (2.0 * h_fd)

    def gauge_transform(self, gauge: HamiltonianPath, n_probe: int = 50) -> "ProjectorPath":
        """Append a rotation factor that must leave the projector path alone.

        The gauge generator has to commute with the base projector
        (probed on a uniform grid within GAUGE_COMMUTE_TOL); the returned
        path has a different unitary_at but the same projector_at within
        propagation accuracy. Existing stage caches are shared.
        """
        if gauge.dim != self.dim:
            raise ValueError(f"gauge generator dim {gauge.dim} does not match {self.dim}")
        if abs(gauge.horizon - self._horizon) > 1e-12 * max(1.0, self._horizon):
            raise ValueError("gauge generator horizon does not match the path horizon")
        for t in np.linspace(0.0, self._horizon, n_probe):
            res = float(np.max(np.abs(commutator(gauge.evaluate(float(t)), self._base.matrix))))
            if res > GAUGE_COMMUTE_TOL:
                raise GaugePreconditionError(
                    f"gauge generator does not commute with the base projector at "
                    f"t={float(t)!r}: residual {res:.3e} > {GAUGE_COMMUTE_TOL:.1e}"
                )
        stages = self._stages + (_Propagator(gauge, self._substep_fraction),)
        return ProjectorPath._with_stages(self._base, self._horizon, self._substep_fraction, stages)

    def reaches_target(
        self, target: Projector, tol: float, n_probe: int
    ) -> tuple[bool, float | None]:
        """First probed time where E(t) matches the target entrywise within tol."""
        if target.dim != self.dim:
            raise ValueError(f"target dim {target.dim} does not match {self.dim}")
        if tol <= 0:
            raise ValueError("tol must be positive")
        if n_probe < 1:
            raise ValueError("n_probe must be at least 1")
        for t in np.linspace(0.0, self._horizon, n_probe):
            e = self.projector_at(float(t)).matrix
            if float(np.max(np.abs(e - target.matrix))) <= tol:
                return True, float(t)
        return False, None
