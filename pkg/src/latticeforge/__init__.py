"""Reduced component-by-component construction of rank-1 lattice rules."""

from .core import (
    GeneratingVector,
    LatticeConfig,
    PointSet,
    ProductWeights,
    ReductionSchedule,
    lattice_points,
    search_space,
    validate_instance,
)
from .errors import LatticeError, ScaleLimitError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "GeneratingVector",
    "LatticeConfig",
    "LatticeError",
    "PointSet",
    "ProductWeights",
    "ReductionSchedule",
    "ScaleLimitError",
    "ValidationError",
    "lattice_points",
    "search_space",
    "validate_instance",
]
