# app/landmarks/kmeans.py
"""
k-means++ landmark selection.

Each replicate: D^2-weighted seeding, Lloyd refinement (empty clusters re-seeded at
the point farthest from every current center), then the lowest-inertia replicate
wins and its centers are mapped to distinct nearest nodes.
"""

from __future__ import annotations

import logging
from typing import List, Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from app.errors import TooManyLandmarks
from app.landmarks.models import LandmarkSet
from app.rbf.models import NodeSet
from app.utils.seeding import make_rng

logger = logging.getLogger(__name__)

REPLICATES = 5
MAX_LLOYD_ITERS = 200
CENTER_TOL = 1e-6


def _kmeanspp_seed(x: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    chosen = [int(rng.integers(n))]
    min_sq = np.sum((x - x[chosen[0]]) ** 2, axis=1)
    for _ in range(1, m):
        total = min_sq.sum()
        if total <= 0.0:
            # only reachable if m exceeds the number of distinct points
            unused = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(unused))
        else:
            # already chosen points carry zero weight and cannot repeat
            nxt = int(rng.choice(n, p=min_sq / total))
        chosen.append(nxt)
        min_sq = np.minimum(min_sq, np.sum((x - x[nxt]) ** 2, axis=1))
    return x[np.asarray(chosen)].copy()


def _assign(x: np.ndarray, centers: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    dist, labels = cKDTree(centers).query(x, k=1)
    return labels.astype(np.intp), dist


def _repair_empty(x: np.ndarray, centers: np.ndarray, counts: np.ndarray) -> np.ndarray:
    empty = np.flatnonzero(counts == 0)
    if empty.size == 0:
        return centers
    centers = centers.copy()
    for j in empty:
        others = np.delete(centers, j, axis=0)
        far = np.min(cdist(x, others), axis=1)
        centers[j] = x[int(np.argmax(far))]
    return centers


def _lloyd(
    x: np.ndarray,
    centers: np.ndarray,
    max_iter: int = MAX_LLOYD_ITERS,
    tol: float = CENTER_TOL,
) -> Tuple[np.ndarray, np.ndarray, List[float]]:
    """Returns (centers, labels, inertia after each assignment step)."""
    m, d = centers.shape
    trace: List[float] = []
    labels, dist = _assign(x, centers)
    trace.append(float(np.sum(dist ** 2)))
    for _ in range(max_iter):
        counts = np.bincount(labels, minlength=m)
        sums = np.stack([np.bincount(labels, weights=x[:, k], minlength=m) for k in range(d)], axis=1)
        new = centers.copy()
        filled = counts > 0
        new[filled] = sums[filled] / counts[filled, None]
        new = _repair_empty(x, new, counts)
        shift = float(np.max(np.linalg.norm(new - centers, axis=1)))
        centers = new
        labels, dist = _assign(x, centers)
        trace.append(float(np.sum(dist ** 2)))
        if shift < tol:
            break
    return centers, labels, trace


def _map_to_nodes(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Nearest node per center; a center whose nearest node is taken gets its nearest unused one."""
    dist = cdist(centers, x)
    used = np.zeros(x.shape[0], dtype=bool)
    out = np.empty(centers.shape[0], dtype=np.intp)
    for j in range(centers.shape[0]):
        i = int(np.argmin(dist[j]))
        if used[i]:
            order = np.argsort(dist[j], kind="stable")
            i = int(order[np.flatnonzero(~used[order])[0]])
        used[i] = True
        out[j] = i
    return out


def kmeanspp_select(
    nodes: NodeSet,
    m: int,
    seed: int,
    *,
    replicates: int = REPLICATES,
    max_iter: int = MAX_LLOYD_ITERS,
    tol: float = CENTER_TOL,
) -> LandmarkSet:
    """Replicate r draws from default_rng(seed + r), r = 0..replicates-1."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m > nodes.n:
        raise TooManyLandmarks(f"m={m} landmarks requested from {nodes.n} nodes")

    x = nodes.points
    best = None
    for r in range(replicates):
        rng = make_rng(seed + r)
        centers, labels, trace = _lloyd(x, _kmeanspp_seed(x, m, rng), max_iter=max_iter, tol=tol)
        inertia = trace[-1]
        logger.debug(f"[kmeans] replicate={r} seed={seed + r} iters={len(trace) - 1} inertia={inertia:.6e}")
        if best is None or inertia < best[2]:
            best = (centers, labels, inertia)

    centers, labels, inertia = best
    return LandmarkSet(indices=_map_to_nodes(x, centers), assignments=labels, inertia=inertia, seed=int(seed))
