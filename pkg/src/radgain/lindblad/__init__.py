"""Exact open-system dynamics on small truncated Fock spaces."""

from .evolve import (AdiabaticRates, ObservableTrajectory, adiabatic_rate_model,
                     evolve, truncation_margin, verify_exponential_decay)
from .kernels import RhsOperator, compiled_available, default_backend
from .reference import (REFERENCE_DIMENSION_CAP, liouvillian_matrix,
                        matrix_exponential_reference)
from .system import (DEFAULT_DIMENSION_CAP, Coupling, InitialState, Jump,
                     LindbladSystem, Mode, add_spectator_mode, dicke_system,
                     random_conserving_system, random_small_system)

__all__ = [
    "AdiabaticRates",
    "Coupling",
    "DEFAULT_DIMENSION_CAP",
    "InitialState",
    "Jump",
    "LindbladSystem",
    "Mode",
    "ObservableTrajectory",
    "REFERENCE_DIMENSION_CAP",
    "RhsOperator",
    "adiabatic_rate_model",
    "add_spectator_mode",
    "compiled_available",
    "default_backend",
    "dicke_system",
    "evolve",
    "liouvillian_matrix",
    "matrix_exponential_reference",
    "random_conserving_system",
    "random_small_system",
    "truncation_margin",
    "verify_exponential_decay",
]
