"""Dynamics of pure states under continuous measurement of moving projectors.

The package integrates the effective evolution a state follows when a
projector is measured continuously, both for a constant projector (where
the state freezes against any Hamiltonian outside the measured subspace)
and for a smoothly rotating one (where the measurement drags the state
along the projector path). A stroboscopic simulator models the same
physics as n repeated projective measurements and converges to the
effective dynamics as n grows, and a rotating-frame integrator provides an
independent route for differential testing.
"""

from .errors import (
    GaugePreconditionError,
    HermiticityError,
    ImpossibleOutcomeError,
    ScenarioError,
    ZenoError,
)
from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Projector,
    adjoint,
    commutator,
    expm_skew_hermitian,
    is_projector,
    project_and_renormalize,
    top_eigenvector,
)
from .hamiltonians import HamiltonianPath, PathValidation, Waveform
from .projectors import ProjectorPath
from .dynamics import (
    ConfinementReport,
    EffectiveGenerator,
    TrajectoryRecord,
    check_confinement,
    effective_hamiltonian,
    integrate_constant,
    integrate_general,
    integrate_rotating_frame,
)
from .stroboscopic import (
    StroboscopicPlan,
    StroboscopicRun,
    SweepTable,
    convergence_sweep,
    fit_convergence_order,
    run_conditional,
    run_sampled,
    short_time_factorization_check,
)
from .scenario import BUNDLED_SCENARIOS, Scenario, bundled_scenario_path, load_bundled

__version__ = "0.1.0"

__all__ = [
    "BUNDLED_SCENARIOS",
    "ConfinementReport",
    "EffectiveGenerator",
    "GaugePreconditionError",
    "HamiltonianPath",
    "HermiticityError",
    "ImpossibleOutcomeError",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "PathValidation",
    "Projector",
    "ProjectorPath",
    "Scenario",
    "ScenarioError",
    "StroboscopicPlan",
    "StroboscopicRun",
    "SweepTable",
    "TrajectoryRecord",
    "Waveform",
    "ZenoError",
    "adjoint",
    "bundled_scenario_path",
    "check_confinement",
    "commutator",
    "convergence_sweep",
    "effective_hamiltonian",
    "expm_skew_hermitian",
    "fit_convergence_order",
    "integrate_constant",
    "integrate_general",
    "integrate_rotating_frame",
    "is_projector",
    "load_bundled",
    "project_and_renormalize",
    "run_conditional",
    "run_sampled",
    "short_time_factorization_check",
    "top_eigenvector",
    "__version__",
]
