# app/rbf/models.py

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from app.errors import InvalidNodeSet, LengthMismatch

DUPLICATE_TOL = 1e-12


class KernelFamily(enum.Enum):
    INVERSE_MULTIQUADRIC = "imq"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class NodeSet:
    """
    Ordered point cloud in [0,1]^dim, dim in {1,2,3}.

    `points` is a read-only (N, dim) float64 array. Points closer than 1e-12 to each
    other are rejected. A single node is allowed (the one-node fold of a
    leave-one-out split); operations that need two nodes check that themselves.
    """
    points: np.ndarray
    id: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] not in (1, 2, 3):
            raise InvalidNodeSet(f"points must have shape (N, d) with d in 1..3, got {pts.shape}")
        if pts.shape[0] < 1:
            raise InvalidNodeSet("node set is empty")
        if not np.all(np.isfinite(pts)):
            raise InvalidNodeSet("non-finite coordinate")
        if pts.min() < 0.0 or pts.max() > 1.0:
            raise InvalidNodeSet(f"coordinates outside [0,1]: min={pts.min()} max={pts.max()}")
        if pts.shape[0] > 1:
            pairs = cKDTree(pts).query_pairs(DUPLICATE_TOL, output_type="ndarray")
            if len(pairs):
                i, j = pairs[0]
                raise InvalidNodeSet(f"duplicate nodes {i} and {j} (within {DUPLICATE_TOL})")
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def take(self, indices: Sequence[int], id: str | None = None) -> "NodeSet":
        idx = np.asarray(indices, dtype=np.intp)
        return NodeSet(self.points[idx], id=self.id if id is None else id)

    def without(self, k: int) -> "NodeSet":
        keep = np.delete(np.arange(self.n), k)
        return self.take(keep, id=f"{self.id}/-{k}")


@dataclass(frozen=True)
class KernelSpec:
    epsilon: float
    jitter: float = 0.0
    family: KernelFamily = KernelFamily.INVERSE_MULTIQUADRIC

    def __post_init__(self):
        if not (self.epsilon > 0.0) or not np.isfinite(self.epsilon):
            raise ValueError(f"epsilon must be positive and finite, got {self.epsilon}")
        if not (self.jitter >= 0.0):
            raise ValueError(f"jitter must be >= 0, got {self.jitter}")

    def with_epsilon(self, epsilon: float) -> "KernelSpec":
        return KernelSpec(epsilon=float(epsilon), jitter=self.jitter, family=self.family)


@dataclass(frozen=True, eq=False)
class InterpolantModel:
    nodes: NodeSet
    spec: KernelSpec
    coefficients: np.ndarray
    # relative training residual ||(A + jitter I) lambda - f|| / ||f||, recorded at fit time
    residual: float = field(default=float("nan"))
    factorization: str = "cholesky"

    def __post_init__(self):
        coef = np.asarray(self.coefficients, dtype=np.float64).reshape(-1)
        if coef.shape[0] != self.nodes.n:
            raise LengthMismatch(f"{coef.shape[0]} coefficients for {self.nodes.n} nodes")
        object.__setattr__(self, "coefficients", _frozen(coef))
