"""Adiabatic quantum search along shaped schedules.

The modules map onto the layers of the study: ``schedule`` (paths s(t)),
``model`` (search Hamiltonians and the projective picture), ``dynamics``
(RK4 evolution), ``deviation`` (hierarchical deviation centres) and
``lab`` (sweeps, figures, acceptance checks and the CLI).
"""

from .deviation import (
    DeviationCenter,
    Residual,
    first_order_center,
    gamma0_center,
    gamma0_matrix,
    residual_against_center,
    second_order_center,
)
from .dynamics import EvolutionConfig, Trajectory, compute_error, evolve_full, evolve_reduced, projective_from_state
from .errors import (
    CapacityError,
    ConfigurationError,
    DegeneracyError,
    DomainError,
    IntegrityError,
    ResolutionError,
    SweepError,
    UnsupportedOrderError,
)
from .model import (
    FixedPoint,
    FullSearchModel,
    build_full_hamiltonian,
    build_reduced_hamiltonian,
    classical_hamiltonian,
    fixed_point,
    gap_lambda,
    state_from_projective,
)
from .schedule import PathKind, SchedulePath, classify_order, eval_path, eval_path_derivative, parse_path

__all__ = [
    "CapacityError",
    "ConfigurationError",
    "DegeneracyError",
    "DeviationCenter",
    "DomainError",
    "EvolutionConfig",
    "FixedPoint",
    "FullSearchModel",
    "IntegrityError",
    "PathKind",
    "Residual",
    "ResolutionError",
    "SchedulePath",
    "SweepError",
    "Trajectory",
    "UnsupportedOrderError",
    "build_full_hamiltonian",
    "build_reduced_hamiltonian",
    "classical_hamiltonian",
    "classify_order",
    "compute_error",
    "eval_path",
    "eval_path_derivative",
    "evolve_full",
    "evolve_reduced",
    "first_order_center",
    "fixed_point",
    "gamma0_center",
    "gamma0_matrix",
    "gap_lambda",
    "parse_path",
    "projective_from_state",
    "residual_against_center",
    "second_order_center",
    "state_from_projective",
]
