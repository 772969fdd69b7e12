"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input is outside the physical domain of an operation."""


class RegimeError(RuntimeError):
    """The requested computation is outside its validity regime."""


class SizingError(ValueError):
    """A Hilbert-space dimension exceeds the configured cap."""


class IntegrationError(RuntimeError):
    """The integrator failed or a conservation check broke along a trajectory."""


class PreconditionError(ValueError):
    """A machine-checked precondition of a theorem or operation is violated."""


class ScenarioError(ValueError):
    """A scenario document failed to parse or validate."""
