"""Quadrature, weighted norms and derivatives on a :class:`RadialGrid`."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.domain.grid import RadialGrid
from src.errors import DomainError


def midpoint_integral(grid: RadialGrid, integrand: np.ndarray) -> float:
    """∫ f dr by the midpoint rule on the cell centres."""

    return float(np.sum(grid.check_field(integrand, "integrand") * grid.dr))


def weighted_lp_norm(
    grid: RadialGrid,
    field: np.ndarray,
    rho: np.ndarray,
    p: float,
    r_pow: float,
    rho_pow: float,
) -> float:
    """Return ‖r^{r_pow} ρ^{rho_pow} field‖_{L^p} with midpoint quadrature."""

    if not p >= 1.0:
        raise DomainError(f"p must be >= 1, got {p}")
    field = grid.check_field(field, "field")
    rho = grid.check_field(rho, "rho")
    integrand = grid.nodes ** (p * r_pow) * rho ** (p * rho_pow) * np.abs(field) ** p
    return midpoint_integral(grid, integrand) ** (1.0 / p)


def l2_norm(grid: RadialGrid, field: np.ndarray) -> float:
    """Unweighted ‖f‖₂ = (∫ f² dr)^{1/2}."""

    field = grid.check_field(field)
    return midpoint_integral(grid, field * field) ** 0.5


@dataclass(frozen=True)
class WeightedNorm:
    """A weighted L^p norm together with the weights it was taken with."""

    p: float
    weight_exponent: float
    density_exponent: float
    value: float

    @classmethod
    def measure(
        cls,
        grid: RadialGrid,
        field: np.ndarray,
        rho: np.ndarray,
        p: float,
        r_pow: float,
        rho_pow: float,
    ) -> "WeightedNorm":
        return cls(
            p=p,
            weight_exponent=r_pow,
            density_exponent=rho_pow,
            value=weighted_lp_norm(grid, field, rho, p, r_pow, rho_pow),
        )


def sup_norm(field: np.ndarray) -> float:
    """Discrete L^∞ norm: the largest |field| over the nodes."""

    field = np.asarray(field, dtype=float)
    if field.size == 0:
        raise DomainError("sup_norm of an empty field")
    return float(np.max(np.abs(field)))


def radial_derivative(grid: RadialGrid, field: np.ndarray) -> np.ndarray:
    """∂_r at the nodes: second-order central inside, second-order one-sided at the ends."""

    if grid.n < 3:
        raise DomainError("radial_derivative needs at least three nodes")
    return np.gradient(grid.check_field(field), grid.nodes, edge_order=2)
