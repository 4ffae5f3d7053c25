"""Partial-pivoted LU solves for the small dense systems of the coefficient
optimization.

Systems are (k + 2) x (k + 2) with k up to ~100, so there is no structure
worth exploiting beyond a careful generic solve: LU with partial pivoting
(LAPACK via scipy), an explicit pivot-magnitude check, and one step of
iterative refinement to tighten residuals toward the 1e-12 scale the
coefficient-matching tests need.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

__all__ = ["DenseSystem", "PIVOT_RTOL", "SingularMatrixError", "solve"]

# A pivot below PIVOT_RTOL * max|A| is treated as numerically singular.
PIVOT_RTOL = 1e-13


class SingularMatrixError(ValueError):
    """Elimination met a pivot too small to trust."""


@dataclass(frozen=True, eq=False)
class DenseSystem:
    """Square system A x = b with finite entries."""

    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.matrix, dtype=float)
        b = np.array(self.rhs, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"matrix must be square and nonempty, got shape {a.shape}")
        if b.shape != (a.shape[0],):
            raise ValueError(
                f"rhs length {b.shape} does not match matrix order {a.shape[0]}"
            )
        if not (np.isfinite(a).all() and np.isfinite(b).all()):
            raise ValueError("system entries must be finite")
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "rhs", b)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def solve(system: DenseSystem) -> np.ndarray:
    """Solve A x = b; raises SingularMatrixError on a sub-threshold pivot.

    Operates on copies of the caller's data.  One iterative-refinement pass
    follows the back substitution.
    """
    a = system.matrix.copy()
    b = system.rhs.copy()
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        raise SingularMatrixError("coefficient matrix is identically zero")
    with warnings.catch_warnings():
        # A hard-zero pivot makes scipy warn; the explicit check below raises.
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a)
    pivots = np.abs(np.diag(lu))
    smallest = float(pivots.min())
    if smallest < PIVOT_RTOL * scale:
        raise SingularMatrixError(
            f"pivot {smallest:.3e} below threshold {PIVOT_RTOL:.0e} * {scale:.3e}"
        )
    x = lu_solve((lu, piv), b)
    residual = b - a @ x
    x = x + lu_solve((lu, piv), residual)
    return x
