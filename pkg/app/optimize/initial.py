# app/optimize/initial.py

from __future__ import annotations

import math

import numpy as np
from scipy.spatial.distance import pdist

from app.errors import DegenerateGeometry, InvalidNodeSet
from app.rbf.models import NodeSet
from app.utils.seeding import make_rng

# exhaustive diameter up to this many points, random subsample of DIAMETER_SAMPLE beyond
DIAMETER_EXACT_MAX = 4096
DIAMETER_SAMPLE = 2000
MEDIAN_SAMPLE = 1000
MEDIAN_OFFSET = 1e-8


def point_set_diameter(points: np.ndarray, seed: int = 0) -> float:
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape[0] > DIAMETER_EXACT_MAX:
        idx = make_rng(seed).choice(pts.shape[0], size=DIAMETER_SAMPLE, replace=False)
        pts = pts[idx]
    return float(pdist(pts).max())


def median_pairwise_distance(points: np.ndarray, seed: int, sample: int = MEDIAN_SAMPLE) -> float:
    pts = np.asarray(points, dtype=np.float64)
    k = min(pts.shape[0], sample)
    idx = make_rng(seed).choice(pts.shape[0], size=k, replace=False)
    return float(np.median(pdist(pts[idx])))


def initial_epsilon(nodes: NodeSet, seed: int = 0) -> float:
    """
    1D: Franke's 0.8 sqrt(N) / D with D = max x - min x.
    2D: modified Franke 0.8 N^(1/4) / D with D the point-set diameter.
    3D: 1 / (median pairwise distance of <= 1000 sampled nodes + 1e-8).
    """
    if nodes.n < 2:
        raise InvalidNodeSet("initial_epsilon needs at least two nodes")
    n = nodes.n
    x = nodes.points
    if nodes.dim == 1:
        d = float(x.max() - x.min())
        if d == 0.0:
            raise DegenerateGeometry("all nodes coincide")
        return 0.8 * math.sqrt(n) / d
    if nodes.dim == 2:
        d = point_set_diameter(x, seed)
        if d == 0.0:
            raise DegenerateGeometry("all nodes coincide")
        return 0.8 * n ** 0.25 / d
    d_med = median_pairwise_distance(x, seed)
    if d_med == 0.0:
        raise DegenerateGeometry("median pairwise distance is zero")
    return 1.0 / (d_med + MEDIAN_OFFSET)
