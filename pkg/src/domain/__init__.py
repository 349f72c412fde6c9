"""Radial grid, state containers and weighted norms."""

from .grid import RadialGrid, make_grid
from .norms import (
    WeightedNorm,
    l2_norm,
    midpoint_integral,
    radial_derivative,
    sup_norm,
    weighted_lp_norm,
)
from .state import FLOOR_SLACK, PrimitiveState, ReformState

__all__ = [
    "FLOOR_SLACK",
    "PrimitiveState",
    "RadialGrid",
    "ReformState",
    "WeightedNorm",
    "l2_norm",
    "make_grid",
    "midpoint_integral",
    "radial_derivative",
    "sup_norm",
    "weighted_lp_norm",
]
