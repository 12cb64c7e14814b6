"""Exception types shared across the package."""


class ZenoError(Exception):
    """Base class for every error this package raises deliberately."""


class ScenarioError(ZenoError):
    """A scenario file failed validation (syntax, shapes, or invariants)."""


class HermiticityError(ZenoError):
    """An operator that must be Hermitian exceeds the residual tolerance."""


class ImpossibleOutcomeError(ZenoError):
    """A conditioned measurement outcome has probability below the floor."""


class GaugePreconditionError(ZenoError):
    """A gauge generator does not commute with the base projector."""
