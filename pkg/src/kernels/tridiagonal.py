"""Banded solve for the θ-implicit momentum system."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from src.errors import DomainError, SingularSystemError


def solve_tridiagonal(
    lower: np.ndarray, diag: np.ndarray, upper: np.ndarray, rhs: np.ndarray
) -> np.ndarray:
    """Solve ``lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]``.

    All four arrays have the same length; ``lower[0]`` and ``upper[-1]`` lie
    outside the matrix and are ignored.
    """

    lower, diag, upper, rhs = (np.asarray(x, dtype=float) for x in (lower, diag, upper, rhs))
    if not lower.shape == diag.shape == upper.shape == rhs.shape or diag.ndim != 1:
        raise DomainError("tridiagonal bands and right-hand side must share one 1-D shape")

    # solve_banded wants the upper band shifted right and the lower band shifted left.
    ab = np.zeros((3, diag.size))
    ab[0, 1:] = upper[:-1]
    ab[1] = diag
    ab[2, :-1] = lower[1:]
    try:
        solution = scipy.linalg.solve_banded((1, 1), ab, rhs)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularSystemError(f"tridiagonal solve failed: {exc}") from exc
    if not np.all(np.isfinite(solution)):
        raise SingularSystemError("tridiagonal solve produced non-finite values")
    return solution


def tridiagonal_matvec(
    lower: np.ndarray, diag: np.ndarray, upper: np.ndarray, x: np.ndarray
) -> np.ndarray:
    """Apply the tridiagonal matrix stored as three bands to ``x``."""

    out = diag * x
    out[1:] += lower[1:] * x[:-1]
    out[:-1] += upper[:-1] * x[1:]
    return out
