"""Time-dependent Hermitian operator paths on a finite horizon [0, T].

Three path kinds cover the scenarios this package runs:

* ``constant``            -- a single Hermitian matrix,
* ``linear_combination``  -- sum of Hermitian matrices weighted by scalar
                             waveforms (const, sin, cos, polynomial),
* ``sampled``             -- a strictly increasing time grid of matrices,
                             linearly interpolated entrywise and then
                             symmetrized to (H + H^dagger)/2.

The waveform set is deliberately closed so scenario files stay declarative
and portable. Sampled grids may contain slightly non-Hermitian matrices;
``evaluate`` always returns a Hermitian matrix, while ``validate`` reports
the raw (pre-symmetrization) residual so malformed grids are visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import HERMITIAN_TOL, as_operator, hermiticity_residual, require_hermitian

WAVEFORM_KINDS = ("const", "sin", "cos", "poly")
PATH_KINDS = ("constant", "linear_combination", "sampled")

_HORIZON_SLACK = 1e-12  # relative slack for endpoint roundoff in t queries


@dataclass(frozen=True)
class Waveform:
    """Scalar function of time drawn from a closed, serializable set."""

    kind: str
    value: float = 0.0
    amplitude: float = 1.0
    omega: float = 1.0
    phase: float = 0.0
    coefficients: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in WAVEFORM_KINDS:
            raise ValueError(f"unknown waveform kind {self.kind!r}, expected one of {WAVEFORM_KINDS}")

    @classmethod
    def const(cls, value: float) -> "Waveform":
        return cls(kind="const", value=float(value))

    @classmethod
    def sin(cls, amplitude: float = 1.0, omega: float = 1.0, phase: float = 0.0) -> "Waveform":
        return cls(kind="sin", amplitude=float(amplitude), omega=float(omega), phase=float(phase))

    @classmethod
    def cos(cls, amplitude: float = 1.0, omega: float = 1.0, phase: float = 0.0) -> "Waveform":
        return cls(kind="cos", amplitude=float(amplitude), omega=float(omega), phase=float(phase))

    @classmethod
    def poly(cls, *coefficients: float) -> "Waveform":
        """Polynomial sum(c_k * t**k) from low to high degree."""
        return cls(kind="poly", coefficients=tuple(float(c) for c in coefficients))

    def __call__(self, t: float) -> float:
        if self.kind == "const":
            return self.value
        if self.kind == "sin":
            return self.amplitude * math.sin(self.omega * t + self.phase)
        if self.kind == "cos":
            return self.amplitude * math.cos(self.omega * t + self.phase)
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc


@dataclass(frozen=True)
class PathValidation:
    """Result of probing a path's raw hermiticity on a uniform grid."""

    n_probe: int
    max_hermiticity_residual: float
    worst_time: float
    passed: bool


class HamiltonianPath:
    """Hermitian operator path H(t), evaluable for 0 <= t <= horizon."""

    def __init__(self, kind, horizon, dim, matrix=None, terms=None, times=None, samples=None):
        # Use the factory classmethods; this constructor trusts its inputs.
        self._kind = kind
        self._horizon = float(horizon)
        self._dim = int(dim)
        self._matrix = matrix
        self._terms = terms
        self._times = times
        self._samples = samples

    @classmethod
    def constant(cls, matrix, horizon: float) -> "HamiltonianPath":
        m = as_operator(matrix)
        require_hermitian(m, what="constant path matrix")
        if horizon <= 0:
            raise ValueError("horizon must be positive")
        m = m.copy()
        m.setflags(write=False)
        return cls("constant", horizon, m.shape[0], matrix=m)

    @classmethod
    def linear_combination(cls, terms, horizon: float) -> "HamiltonianPath":
        """terms: iterable of (matrix, Waveform); every matrix must be Hermitian."""
        if horizon <= 0:
            raise ValueError("horizon must be positive")
        prepared = []
        dim = None
        for matrix, waveform in terms:
            m = as_operator(matrix)
            require_hermitian(m, what="linear combination term")
            if not isinstance(waveform, Waveform):
                raise TypeError("each term needs a Waveform")
            if dim is None:
                dim = m.shape[0]
            elif m.shape[0] != dim:
                raise ValueError("linear combination terms have mismatched dimensions")
            m = m.copy()
            m.setflags(write=False)
            prepared.append((m, waveform))
        if not prepared:
            raise ValueError("linear combination needs at least one term")
        return cls("linear_combination", horizon, dim, terms=tuple(prepared))

    @classmethod
    def sampled(cls, times, samples) -> "HamiltonianPath":
        """Grid of (t_k, matrix) spanning [0, T]; T is taken from the last time."""
        ts = np.asarray(times, dtype=float)
        if ts.ndim != 1 or ts.size < 2:
            raise ValueError("sampled path needs at least two grid times")
        if np.any(np.diff(ts) <= 0):
            raise ValueError("sampled grid times must be strictly increasing")
        if abs(ts[0]) > _HORIZON_SLACK:
            raise ValueError("sampled grid must start at t = 0")
        mats = [as_operator(s) for s in samples]
        if len(mats) != ts.size:
            raise ValueError("sampled path needs one matrix per grid time")
        dim = mats[0].shape[0]
        if any(m.shape[0] != dim for m in mats):
            raise ValueError("sampled matrices have mismatched dimensions")
        stack = np.array(mats, dtype=complex)
        stack.setflags(write=False)
        ts.setflags(write=False)
        return cls("sampled", float(ts[-1]), dim, times=ts, samples=stack)

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def horizon(self) -> float:
        return self._horizon

    def _clip_time(self, t: float) -> float:
        slack = _HORIZON_SLACK * max(1.0, self._horizon)
        if t < -slack or t > self._horizon + slack:
            raise ValueError(f"time {t!r} outside horizon [0, {self._horizon!r}]")
        return min(max(t, 0.0), self._horizon)

    def _raw(self, t: float) -> np.ndarray:
        if self._kind == "constant":
            return self._matrix
        if self._kind == "linear_combination":
            out = np.zeros((self._dim, self._dim), dtype=complex)
            for m, f in self._terms:
                out += f(t) * m
            return out
        k = int(np.searchsorted(self._times, t, side="right")) - 1
        k = min(max(k, 0), self._times.size - 2)
        t0, t1 = self._times[k], self._times[k + 1]
        w = (t - t0) / (t1 - t0)
        return (1.0 - w) * self._samples[k] + w * self._samples[k + 1]

    def evaluate(self, t: float) -> np.ndarray:
        """Hermitian matrix at time t; sampled paths are symmetrized."""
        t = self._clip_time(t)
        raw = self._raw(t)
        if self._kind == "sampled":
            return (raw + raw.conj().T) / 2.0
        return raw

    def validate(self, n_probe: int = 32) -> PathValidation:
        """Probe the raw path on a uniform grid and report the worst residual."""
        if n_probe < 2:
            raise ValueError("n_probe must be at least 2")
        worst = 0.0
        worst_t = 0.0
        for t in np.linspace(0.0, self._horizon, n_probe):
            res = hermiticity_residual(self._raw(float(t)))
            if res > worst:
                worst, worst_t = res, float(t)
        return PathValidation(
            n_probe=n_probe,
            max_hermiticity_residual=worst,
            worst_time=worst_t,
            passed=worst <= HERMITIAN_TOL,
        )
