"""Physical constants of the symmetric degenerate-viscosity system.

Assumptions
-----------
- Pressure is P(ρ) = ρ^γ and shear viscosity μ(ρ) = ρ^δ; both coefficients are
  fixed at 1, so every formula below drops them.
- The bulk viscosity follows the BD relation λ(ρ) = 2(μ'(ρ)ρ − μ(ρ)) =
  2(δ − 1)ρ^δ, so 2μ + 3λ = (6δ − 4)ρ^δ, which is nonnegative only for δ ≥ 2/3.
- The moment exponent α is only meaningful for the isothermal case γ = 1, where
  it must lie strictly inside (1, 2); for γ > 1 it is zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from src.errors import DomainError

TWO_THIRDS = 2.0 / 3.0
# δ = 2/3 is not exactly representable; accept the nearest doubles below it.
_DELTA_SLACK = 1e-12


@dataclass(frozen=True)
class PhysParams:
    """Physical parameters (γ, δ, a, η, α) with their validity checks."""

    gamma: float
    delta: float
    a: float
    eta: float = 0.0
    alpha: float = 0.0
    pressure_coeff: float = 1.0
    viscosity_coeff: float = 1.0

    def __post_init__(self) -> None:
        if not self.gamma >= 1.0:
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")
        if not (TWO_THIRDS - _DELTA_SLACK <= self.delta < 1.0):
            raise DomainError(f"delta must satisfy 2/3 <= delta < 1, got {self.delta}")
        if not self.a > 0.0:
            raise DomainError(f"inner radius a must be positive, got {self.a}")
        if not self.eta >= 0.0:
            raise DomainError(f"eta must be nonnegative, got {self.eta}")
        if self.gamma == 1.0:
            if not 1.0 < self.alpha < 2.0:
                raise DomainError(f"gamma = 1 requires 1 < alpha < 2, got {self.alpha}")
        elif self.alpha != 0.0:
            raise DomainError(f"alpha is only used when gamma = 1; got alpha={self.alpha}")
        if self.pressure_coeff != 1.0 or self.viscosity_coeff != 1.0:
            raise DomainError("pressure and viscosity coefficients are fixed at 1")

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "PhysParams":
        """Build parameters from a dictionary-like source."""

        return cls(
            gamma=float(mapping["gamma"]),
            delta=float(mapping["delta"]),
            a=float(mapping["a"]),
            eta=float(mapping.get("eta", 0.0)),
            alpha=float(mapping.get("alpha", 0.0)),
        )

    @property
    def isothermal(self) -> bool:
        return self.gamma == 1.0

    @property
    def damping_coeff(self) -> float:
        """γ/(2δ), the rate factor multiplying φ(v − u)."""

        return self.gamma / (2.0 * self.delta)

    @property
    def bulk_viscosity_ratio(self) -> float:
        """(2μ + 3λ)/ρ^δ = 6δ − 4."""

        return 6.0 * self.delta - 4.0

    @property
    def moment_exponent(self) -> float:
        return self.alpha if self.isothermal else 0.0
