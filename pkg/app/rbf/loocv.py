# app/rbf/loocv.py
"""
Leave-one-out objective L(eps) = ||E(eps)||_2^2 for RBF interpolation.

Three evaluators share one result type:
  loocv_naive             refit on N-1 nodes for every k (O(N^4), test oracle)
  loocv_full_closed_form  E_k = (A^-1 f)_k / (A^-1)_kk with one O(N^3) factorization
  loocv_nystrom           same identity applied to C W^-1 C^T + lambda_reg I through the
                          Woodbury formula; nothing N x N is ever built

Numerical failure never raises out of these functions: the evaluation comes back
invalid (objective None) with the failing error's name in `reason`.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.errors import LengthMismatch, NonpositiveDiagonal, SingularSystem
from app.landmarks.models import LandmarkSet
from app.rbf.kernel import assemble_full, assemble_reduced, evaluate, fit
from app.rbf.linalg import Factorization, factorize
from app.rbf.models import KernelSpec, NodeSet

logger = logging.getLogger(__name__)


class LoocvMethod(enum.Enum):
    NAIVE_ORACLE = "naive"
    FULL_CLOSED_FORM = "full"
    NYSTROM_WOODBURY = "nystrom"


@dataclass(frozen=True, eq=False)
class LoocvEvaluation:
    epsilon: float
    objective: Optional[float]
    residuals: np.ndarray
    method: LoocvMethod
    wall_time: float = 0.0
    reason: Optional[str] = None

    @property
    def valid(self) -> bool:
        return self.objective is not None

    @classmethod
    def from_residuals(cls, epsilon: float, residuals, method: LoocvMethod, wall_time: float = 0.0) -> "LoocvEvaluation":
        e = np.asarray(residuals, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(e)):
            return cls(float(epsilon), None, e, method, wall_time, reason="NonFiniteResidual")
        obj = float(np.dot(e, e))
        if not np.isfinite(obj):
            return cls(float(epsilon), None, e, method, wall_time, reason="NonFiniteObjective")
        return cls(float(epsilon), obj, e, method, wall_time)

    @classmethod
    def invalid(cls, epsilon: float, method: LoocvMethod, reason: str, n: int = 0, wall_time: float = 0.0) -> "LoocvEvaluation":
        return cls(float(epsilon), None, np.full(n, np.nan), method, wall_time, reason=reason)


def _values(nodes: NodeSet, values) -> np.ndarray:
    f = np.asarray(values, dtype=np.float64).reshape(-1)
    if f.shape[0] != nodes.n:
        raise LengthMismatch(f"{f.shape[0]} values for {nodes.n} nodes")
    if nodes.n < 2:
        raise LengthMismatch("leave-one-out needs at least two nodes")
    return f


def loocv_naive(nodes: NodeSet, values, spec: KernelSpec) -> LoocvEvaluation:
    f = _values(nodes, values)
    t0 = time.perf_counter()
    e = np.empty(nodes.n)
    for k in range(nodes.n):
        try:
            model = fit(nodes.without(k), np.delete(f, k), spec)
        except SingularSystem as err:
            logger.debug(f"[loocv] naive fold {k} singular at eps={spec.epsilon:.6g}: {err}")
            return LoocvEvaluation.invalid(spec.epsilon, LoocvMethod.NAIVE_ORACLE, "SingularSystem",
                                           nodes.n, time.perf_counter() - t0)
        e[k] = f[k] - evaluate(model, nodes.points[k:k + 1])[0]
    return LoocvEvaluation.from_residuals(spec.epsilon, e, LoocvMethod.NAIVE_ORACLE, time.perf_counter() - t0)


def loocv_full_closed_form(nodes: NodeSet, values, spec: KernelSpec) -> LoocvEvaluation:
    f = _values(nodes, values)
    t0 = time.perf_counter()
    try:
        fac = factorize(assemble_full(nodes, spec))
        coef = fac.solve(f)
        diag = fac.inverse_diagonal()
    except SingularSystem as err:
        logger.debug(f"[loocv] full singular at eps={spec.epsilon:.6g}: {err}")
        return LoocvEvaluation.invalid(spec.epsilon, LoocvMethod.FULL_CLOSED_FORM, "SingularSystem",
                                       nodes.n, time.perf_counter() - t0)
    with np.errstate(divide="ignore", invalid="ignore"):
        e = coef / diag
    return LoocvEvaluation.from_residuals(spec.epsilon, e, LoocvMethod.FULL_CLOSED_FORM, time.perf_counter() - t0)


@dataclass(frozen=True, eq=False)
class WoodburyFactors:
    """
    (C W^-1 C^T + lambda_reg I)^-1
        = lambda_reg^-1 I - lambda_reg^-2 C M^-1 C^T,   M = W + lambda_reg^-1 C^T C
    """
    m_matrix: np.ndarray
    factorization: Factorization
    c_matrix: np.ndarray
    lambda_reg: float

    def apply_inverse(self, v: np.ndarray) -> np.ndarray:
        lam = self.lambda_reg
        z = self.factorization.solve(self.c_matrix.T @ v)
        return v / lam - (self.c_matrix @ z) / (lam * lam)

    def inverse_diagonal(self) -> np.ndarray:
        lam = self.lambda_reg
        t = self.factorization.solve(self.c_matrix.T).T  # T = C M^-1, N x m
        return 1.0 / lam - np.einsum("ij,ij->i", t, self.c_matrix) / (lam * lam)


def woodbury_factors(c: np.ndarray, w: np.ndarray, lambda_reg: float) -> WoodburyFactors:
    if not lambda_reg > 0:
        raise ValueError(f"lambda_reg must be > 0, got {lambda_reg}")
    m = w + (c.T @ c) / lambda_reg
    m = 0.5 * (m + m.T)
    return WoodburyFactors(m_matrix=m, factorization=factorize(m), c_matrix=c, lambda_reg=float(lambda_reg))


def loocv_nystrom(
    nodes: NodeSet,
    values,
    landmarks: LandmarkSet,
    epsilon: float,
    lambda_reg: float,
) -> LoocvEvaluation:
    f = _values(nodes, values)
    if not lambda_reg > 0:
        raise ValueError(f"lambda_reg must be > 0 for the Woodbury form, got {lambda_reg}")
    t0 = time.perf_counter()
    spec = KernelSpec(epsilon=float(epsilon), jitter=0.0)
    c, w = assemble_reduced(nodes, landmarks.indices, spec)
    try:
        wf = woodbury_factors(c, w, lambda_reg)
        u = wf.apply_inverse(f)
        d = wf.inverse_diagonal()
        if not np.all(np.isfinite(d)) or np.any(d <= 0.0):
            raise NonpositiveDiagonal(f"min diagonal {np.nanmin(d):.3e}")
    except (SingularSystem, NonpositiveDiagonal) as err:
        logger.debug(f"[loocv] nystrom invalid at eps={epsilon:.6g} m={landmarks.m}: {err}")
        return LoocvEvaluation.invalid(epsilon, LoocvMethod.NYSTROM_WOODBURY, type(err).__name__,
                                       nodes.n, time.perf_counter() - t0)
    return LoocvEvaluation.from_residuals(epsilon, u / d, LoocvMethod.NYSTROM_WOODBURY, time.perf_counter() - t0)
