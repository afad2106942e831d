# app/rbf/linalg.py
"""
Symmetric solves with a Cholesky-first, pivoted-LU-fallback strategy.

IMQ matrices plus jitter are SPD in exact arithmetic, but at small epsilon they are
numerically indefinite often enough that Cholesky fails; LU with partial pivoting
still produces a usable (if inaccurate) solve in that regime.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import linalg as sla

from app.errors import SingularSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Factorization:
    kind: str  # "cholesky" | "lu"
    handle: Any
    n: int

    def solve(self, b: np.ndarray) -> np.ndarray:
        if self.kind == "cholesky":
            return sla.cho_solve(self.handle, b, check_finite=False)
        return sla.lu_solve(self.handle, b, check_finite=False)

    def inverse_diagonal(self) -> np.ndarray:
        """diag(A^-1) without forming A^-1 when the Cholesky factor is available."""
        eye = np.eye(self.n)
        if self.kind == "cholesky":
            c, lower = self.handle
            # A = L L^T  =>  (A^-1)_kk = || L^-1 e_k ||^2
            l_factor = c if lower else c.T
            linv = sla.solve_triangular(l_factor, eye, lower=True, check_finite=False)
            return np.einsum("ij,ij->j", linv, linv)
        return np.diag(self.solve(eye)).copy()


def factorize(matrix: np.ndarray) -> Factorization:
    """
    Factor a symmetric matrix. Raises SingularSystem when neither factorization
    yields finite, nonsingular factors.
    """
    a = np.asarray(matrix, dtype=np.float64)
    n = a.shape[0]
    if not np.all(np.isfinite(a)):
        raise SingularSystem("matrix has non-finite entries")

    try:
        c, lower = sla.cho_factor(a, lower=True, check_finite=False)
        if np.all(np.isfinite(c)) and np.all(np.diag(c) > 0):
            return Factorization("cholesky", (c, lower), n)
    except np.linalg.LinAlgError as e:
        logger.debug(f"[linalg] cholesky failed (n={n}): {e}; falling back to LU")

    with warnings.catch_warnings():
        # lu_factor only warns on an exactly zero pivot
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        try:
            lu, piv = sla.lu_factor(a, check_finite=False)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise SingularSystem(f"LU factorization failed: {e}") from e

    d = np.abs(np.diag(lu))
    if not np.all(np.isfinite(lu)) or np.any(d == 0.0):
        raise SingularSystem(f"matrix is singular to working precision (n={n})")
    return Factorization("lu", (lu, piv), n)
