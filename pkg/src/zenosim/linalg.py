"""Dense complex linear algebra shared by all dynamics modules.

Operators are square complex128 numpy arrays, states are 1-d complex128
unit vectors. All propagator factors go through an eigendecomposition of
a Hermitian generator, so each factor is unitary to machine precision
regardless of the step size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HermiticityError, ImpossibleOutcomeError

HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-10
PROB_FLOOR = 1e-14  # below this a conditioned outcome counts as impossible
TRACE_INT_TOL = 1e-6  # projector trace must sit this close to an integer

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
for _p in (PAULI_X, PAULI_Y, PAULI_Z):
    _p.setflags(write=False)
del _p


def as_operator(a) -> np.ndarray:
    """Coerce to a square complex128 matrix with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ValueError("operator must have positive dimension")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("operator has non-finite entries")
    return m


def as_state(v, norm_tol: float = NORM_TOL) -> np.ndarray:
    """Coerce to a complex128 unit vector; reject norms off by more than norm_tol."""
    psi = np.asarray(v, dtype=complex)
    if psi.ndim != 1 or psi.size == 0:
        raise ValueError(f"state must be a non-empty vector, got shape {psi.shape}")
    if not np.all(np.isfinite(psi.real)) or not np.all(np.isfinite(psi.imag)):
        raise ValueError("state has non-finite entries")
    nrm = float(np.linalg.norm(psi))
    if abs(nrm - 1.0) > norm_tol:
        raise ValueError(f"state norm {nrm!r} deviates from 1 beyond {norm_tol}")
    return psi


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a, dtype=complex).conj().T


def hermiticity_residual(a: np.ndarray) -> float:
    """Entrywise max of |a - a^dagger|."""
    a = np.asarray(a, dtype=complex)
    return float(np.max(np.abs(a - a.conj().T)))


def require_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL, what: str = "operator") -> None:
    res = hermiticity_residual(a)
    if res > tol:
        raise HermiticityError(f"{what} has hermiticity residual {res:.3e} > {tol:.1e}")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a @ b - b @ a."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"commutator needs equal shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def expm_skew_hermitian(h: np.ndarray, dt: float) -> np.ndarray:
    """exp(-1j * dt * h) for Hermitian h, via eigendecomposition.

    Exactly unitary up to roundoff for any dt; raises HermiticityError for
    non-Hermitian input.
    """
    h = as_operator(h)
    require_hermitian(h, what="exponential generator")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * dt * w)) @ v.conj().T


def is_projector(a: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[bool, int]:
    """Whether a is Hermitian and idempotent within tol, plus round(trace).

    The returned rank is meaningful only when the first element is True.
    """
    a = as_operator(a)
    rank = int(round(float(np.trace(a).real)))
    if hermiticity_residual(a) > tol:
        return False, rank
    if float(np.max(np.abs(a @ a - a))) > tol:
        return False, rank
    return True, rank


@dataclass(frozen=True, eq=False)
class Projector:
    """Hermitian idempotent operator together with its rank."""

    matrix: np.ndarray
    rank: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, m, tol: float = HERMITIAN_TOL) -> "Projector":
        """Validate Hermiticity, idempotency, and integer trace, then wrap.

        tol bounds the Hermiticity and idempotency residuals; the trace must
        be within TRACE_INT_TOL of an integer regardless of tol.
        """
        m = as_operator(m)
        ok, _ = is_projector(m, tol)
        if not ok:
            raise ValueError(
                f"matrix is not a projector within tol {tol:.1e} "
                f"(hermiticity {hermiticity_residual(m):.3e}, "
                f"idempotency {float(np.max(np.abs(m @ m - m))):.3e})"
            )
        tr = float(np.trace(m).real)
        if abs(tr - round(tr)) > TRACE_INT_TOL:
            raise ValueError(f"projector trace {tr!r} is not near an integer")
        m = m.copy()
        m.setflags(write=False)
        return cls(matrix=m, rank=int(round(tr)))

    @classmethod
    def diagonal(cls, entries) -> "Projector":
        """Projector with a 0/1 diagonal, e.g. diagonal([1, 0])."""
        ent = [int(e) for e in entries]
        if any(e not in (0, 1) for e in ent):
            raise ValueError("diagonal projector entries must be 0 or 1")
        return cls.from_matrix(np.diag(np.array(ent, dtype=complex)))

    def complement(self) -> "Projector":
        return Projector.from_matrix(np.eye(self.dim, dtype=complex) - self.matrix)


def project_and_renormalize(e: Projector, psi: np.ndarray) -> tuple[np.ndarray, float]:
    """Condition psi on outcome 1 of the projector e.

    Returns (e @ psi normalized, probability) with probability = |e psi|^2.
    Raises ImpossibleOutcomeError when the probability is below PROB_FLOOR;
    callers deciding between outcome branches must catch it.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (e.dim,):
        raise ValueError(f"state shape {psi.shape} does not match projector dim {e.dim}")
    phi = e.matrix @ psi
    p = float(np.vdot(phi, phi).real)
    if p < PROB_FLOOR:
        raise ImpossibleOutcomeError(
            f"measurement outcome impossible: probability {p:.3e} < {PROB_FLOOR:.1e}"
        )
    if p > 1.0 + 1e-12:
        raise ValueError(f"probability {p!r} exceeds 1 beyond roundoff")
    return phi / np.sqrt(p), min(p, 1.0)


def top_eigenvector(m: np.ndarray) -> np.ndarray:
    """Unit eigenvector of the largest eigenvalue, with a fixed phase.

    The phase is chosen so the largest-magnitude component (lowest index on
    ties) is real and positive, which keeps generated initial states stable
    across runs.
    """
    m = as_operator(m)
    require_hermitian(m)
    _, vecs = np.linalg.eigh(m)
    v = vecs[:, -1]
    i = int(np.argmax(np.abs(v)))
    phase = v[i] / abs(v[i])
    v = v / phase
    return v / np.linalg.norm(v)
