"""Truncated radial meshes for the exterior domain r ≥ a.

Assumptions
-----------
- The unbounded interval [a, ∞) is truncated at ``r_max``; far-field decay is
  represented by the η shift of the regularised problem and a boundary
  condition on u at ``r_max``.
- Cells are finite volumes: faces are stored explicitly and unknowns live at
  cell centres (face midpoints).
- Every integral functional uses the same midpoint rule with these centres and
  widths, so discrete identities between functionals hold exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.errors import DomainError


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class RadialGrid:
    """Cell-centred mesh on [a, r_max].

    Parameters
    ----------
    a: float
        Inner radius (first face).
    r_max: float
        Truncation radius (last face).
    n: int
        Number of cells.
    faces: numpy.ndarray
        ``n + 1`` strictly increasing face radii.
    nodes: numpy.ndarray
        ``n`` cell-centre radii, midpoints of neighbouring faces.
    dr: numpy.ndarray
        ``n`` positive cell widths.
    """

    a: float
    r_max: float
    n: int
    faces: np.ndarray
    nodes: np.ndarray
    dr: np.ndarray

    @classmethod
    def from_faces(cls, faces: np.ndarray) -> "RadialGrid":
        faces = np.asarray(faces, dtype=float)
        if faces.ndim != 1 or faces.size < 2:
            raise DomainError("faces must be a one-dimensional array with at least two entries")
        widths = np.diff(faces)
        if np.any(widths <= 0.0):
            raise DomainError("faces must be strictly increasing")
        return cls(
            a=float(faces[0]),
            r_max=float(faces[-1]),
            n=int(faces.size - 1),
            faces=_frozen(faces),
            nodes=_frozen(0.5 * (faces[:-1] + faces[1:])),
            dr=_frozen(widths),
        )

    @property
    def min_dr(self) -> float:
        return float(self.dr.min())

    def check_field(self, field: np.ndarray, name: str = "field") -> np.ndarray:
        """Return ``field`` as a float array, rejecting the wrong size."""

        array = np.asarray(field, dtype=float)
        if array.shape != (self.n,):
            raise DomainError(f"{name} has shape {array.shape}, grid needs ({self.n},)")
        return array


def make_grid(a: float, r_max: float, n: int, stretch: float = 1.0) -> RadialGrid:
    """Build a uniform or geometrically stretched mesh.

    With ``stretch = s > 1`` consecutive widths grow by the ratio ``s**(1/n)``,
    so the last cell is roughly ``s`` times wider than the first.
    """

    if not a > 0.0:
        raise DomainError(f"a must be positive, got {a}")
    if not r_max > a:
        raise DomainError(f"r_max must exceed a, got r_max={r_max}, a={a}")
    if int(n) != n or n < 4:
        raise DomainError(f"n must be an integer >= 4, got {n}")
    if not stretch >= 1.0:
        raise DomainError(f"stretch must be >= 1, got {stretch}")

    n = int(n)
    if stretch == 1.0:
        return RadialGrid.from_faces(np.linspace(a, r_max, n + 1))

    ratio = stretch ** (1.0 / n)
    widths = ratio ** np.arange(n)
    widths *= (r_max - a) / widths.sum()
    faces = np.empty(n + 1)
    faces[0] = a
    faces[1:] = a + np.cumsum(widths)
    faces[-1] = r_max
    return RadialGrid.from_faces(faces)
