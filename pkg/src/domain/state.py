"""Field containers for the primitive (ρ, u) and reformulated systems."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Iterator

import numpy as np

from src.domain.grid import RadialGrid
from src.errors import DomainError, PositivityError

# Relative slack on the density floor: transport round-off may nudge ρ below η.
FLOOR_SLACK = 10.0 * np.finfo(float).eps


def _snapshot(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


class _FieldSet:
    """Shared behaviour of the state snapshots: size checks and iteration."""

    t: float

    def _array_names(self) -> list[str]:
        return [f.name for f in fields(self) if f.name != "t"]  # type: ignore[arg-type]

    def _freeze_arrays(self) -> None:
        sizes = set()
        for name in self._array_names():
            array = _snapshot(getattr(self, name))
            if array.ndim != 1:
                raise DomainError(f"{name} must be one-dimensional")
            sizes.add(array.size)
            object.__setattr__(self, name, array)
        if len(sizes) != 1:
            raise DomainError(f"state arrays have mismatched sizes {sorted(sizes)}")

    @property
    def size(self) -> int:
        return int(getattr(self, self._array_names()[0]).size)

    def arrays(self) -> Iterator[tuple[str, np.ndarray]]:
        for name in self._array_names():
            yield name, getattr(self, name)

    def check_grid(self, grid: RadialGrid) -> None:
        if self.size != grid.n:
            raise DomainError(f"state has {self.size} entries, grid has {grid.n} cells")


@dataclass(frozen=True)
class PrimitiveState(_FieldSet):
    """Density and radial velocity at the cell centres at time ``t``."""

    t: float
    rho: np.ndarray
    u: np.ndarray

    def __post_init__(self) -> None:
        self._freeze_arrays()

    def check_floor(self, eta: float) -> None:
        """Raise unless ρ ≥ η everywhere (up to transport round-off)."""

        floor = eta * (1.0 - FLOOR_SLACK)
        if np.any(self.rho < floor) or (eta == 0.0 and np.any(self.rho <= 0.0)):
            raise PositivityError(f"density {self.rho.min()!r} below floor {eta!r}")


@dataclass(frozen=True)
class ReformState(_FieldSet):
    """Fields (ρ, h, φ, v, u) of the effective-velocity system.

    h = 2ρ^{δ−1}, φ = ρ^{γ−δ} and v is the effective velocity. When h and φ are
    transported rather than recomputed they agree with ρ only up to the
    truncation error of the scheme.
    """

    t: float
    rho: np.ndarray
    h: np.ndarray
    phi: np.ndarray
    v: np.ndarray
    u: np.ndarray

    def __post_init__(self) -> None:
        self._freeze_arrays()
        if np.any(self.h[self.rho > 0.0] <= 0.0) or np.any(self.phi[self.rho > 0.0] <= 0.0):
            raise PositivityError("h and phi must be positive wherever rho is")

    def with_fields(self, **changes) -> "ReformState":
        return replace(self, **changes)

    def primitive(self) -> PrimitiveState:
        return PrimitiveState(t=self.t, rho=self.rho, u=self.u)
