# app/rbf/kernel.py

from __future__ import annotations

import logging
from typing import Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from app.errors import (
    DimensionMismatch,
    DuplicateLandmark,
    EmptyTestSet,
    LandmarkOutOfRange,
    LengthMismatch,
    SingularSystem,
)
from app.rbf.linalg import factorize
from app.rbf.models import InterpolantModel, KernelSpec, NodeSet

logger = logging.getLogger(__name__)

# rows of the query x node kernel block built per chunk in evaluate()
EVAL_CHUNK = 2048


def imq_phi(r, epsilon: float):
    """Inverse multiquadric 1/sqrt(1 + (eps r)^2); works on scalars and arrays."""
    er = np.multiply(epsilon, r)
    return 1.0 / np.sqrt(1.0 + er * er)


def _as_queries(points, dim: int) -> np.ndarray:
    q = np.asarray(points, dtype=np.float64)
    if q.ndim == 1:
        q = q[:, None] if dim == 1 else q[None, :]
    if q.ndim != 2 or q.shape[1] != dim:
        raise DimensionMismatch(f"expected points of dimension {dim}, got shape {q.shape}")
    return q


def assemble_full(nodes: NodeSet, spec: KernelSpec) -> np.ndarray:
    """A_ij = phi(|x_i - x_j|; eps) + jitter * delta_ij, built from the upper triangle."""
    if nodes.n == 1:
        return np.array([[1.0 + spec.jitter]])
    a = squareform(imq_phi(pdist(nodes.points), spec.epsilon))
    # squareform leaves zeros on the diagonal; phi(0) = 1
    np.fill_diagonal(a, 1.0 + spec.jitter)
    return a


def _check_landmarks(n: int, landmark_indices: Sequence[int]) -> np.ndarray:
    idx = np.asarray(landmark_indices, dtype=np.intp).reshape(-1)
    if idx.size == 0:
        raise LandmarkOutOfRange("empty landmark list")
    if idx.min() < 0 or idx.max() >= n:
        raise LandmarkOutOfRange(f"landmark index outside [0, {n})")
    if np.unique(idx).size != idx.size:
        raise DuplicateLandmark(f"landmark indices repeat ({idx.size - np.unique(idx).size} duplicates)")
    return idx


def assemble_reduced(
    nodes: NodeSet,
    landmark_indices: Sequence[int],
    spec: KernelSpec,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nystrom blocks: C (N x m) against the landmark nodes and W (m x m), its rows at the
    landmarks. Neither carries jitter.
    """
    idx = _check_landmarks(nodes.n, landmark_indices)
    c = imq_phi(cdist(nodes.points, nodes.points[idx]), spec.epsilon)
    w = c[idx, :].copy()
    # cdist is symmetric up to rounding of the summation order; pin it
    w = 0.5 * (w + w.T)
    np.fill_diagonal(w, 1.0)
    return c, w


def nystrom_reconstruct(c: np.ndarray, w: np.ndarray) -> np.ndarray:
    """C W^-1 C^T via a factorization of W (W is never inverted explicitly)."""
    fac = factorize(w)
    return c @ fac.solve(c.T)


def fit(nodes: NodeSet, values, spec: KernelSpec) -> InterpolantModel:
    """Solve (A + jitter I) lambda = f."""
    f = np.asarray(values, dtype=np.float64).reshape(-1)
    if f.shape[0] != nodes.n:
        raise LengthMismatch(f"{f.shape[0]} values for {nodes.n} nodes")

    a = assemble_full(nodes, spec)
    fac = factorize(a)  # raises SingularSystem
    coef = fac.solve(f)
    if not np.all(np.isfinite(coef)):
        raise SingularSystem("solve produced non-finite coefficients")
    fnorm = np.linalg.norm(f)
    res = np.linalg.norm(a @ coef - f)
    rel = float(res / fnorm) if fnorm > 0 else float(res)
    if spec.jitter <= 1e-10 and rel > 1e-6:
        logger.debug(f"[fit] training residual {rel:.3e} at eps={spec.epsilon:.6g} ({fac.kind})")
    return InterpolantModel(nodes=nodes, spec=spec, coefficients=coef, residual=rel, factorization=fac.kind)


def evaluate(model: InterpolantModel, query_points) -> np.ndarray:
    """s(q) = sum_i lambda_i phi(|q - x_i|; eps)."""
    q = _as_queries(query_points, model.nodes.dim)
    out = np.empty(q.shape[0])
    x = model.nodes.points
    for start in range(0, q.shape[0], EVAL_CHUNK):
        block = imq_phi(cdist(q[start:start + EVAL_CHUNK], x), model.spec.epsilon)
        out[start:start + EVAL_CHUNK] = block @ model.coefficients
    return out


def rms_error(model: InterpolantModel, test_points, true_values) -> float:
    if np.size(test_points) == 0:
        raise EmptyTestSet("rms_error needs at least one test point")
    truth = np.asarray(true_values, dtype=np.float64).reshape(-1)
    q = _as_queries(test_points, model.nodes.dim)
    if q.shape[0] != truth.shape[0]:
        raise LengthMismatch(f"{q.shape[0]} test points but {truth.shape[0]} true values")
    err = evaluate(model, q) - truth
    return float(np.sqrt(np.mean(err * err)))
