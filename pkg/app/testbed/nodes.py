# app/testbed/nodes.py

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from app.errors import InvalidNodeSet
from app.rbf.models import NodeSet
from app.testbed.functions import TestFunction
from app.utils.seeding import make_rng, stable_seed

FULL_SIZES = [64, 128, 256, 512, 1024, 2048, 4096]
NYSTROM_SIZES = [512, 1024, 2048, 4096]
EXTRA_TIER = 8192
N_TEST = 5000


class NodeScheme(enum.Enum):
    UNIFORM = "uniform"
    COSINE_MAPPED = "cosine"


def cosine_map(x):
    """x -> 0.5 (1 - cos(pi x)); clusters nodes toward 0 and 1."""
    return 0.5 * (1.0 - np.cos(np.pi * np.asarray(x, dtype=np.float64)))


def default_scheme(dim: int) -> NodeScheme:
    return NodeScheme.COSINE_MAPPED if dim == 3 else NodeScheme.UNIFORM


def make_nodes(dim: int, n: int, scheme: NodeScheme, seed: int) -> NodeSet:
    if n < 2:
        raise InvalidNodeSet(f"need at least two nodes, got {n}")
    pts = make_rng(seed).random((n, dim))
    if scheme is NodeScheme.COSINE_MAPPED:
        pts = cosine_map(pts)
    return NodeSet(pts, id=f"{scheme.value}-d{dim}-n{n}-s{seed}")


def test_points(f: TestFunction, n_test: int = N_TEST) -> np.ndarray:
    """Uniform points on [0,1]^d, fixed per test function."""
    return make_rng(stable_seed("test-points", f.name)).random((n_test, f.dim))


@dataclass(frozen=True)
class ExperimentDesign:
    function: TestFunction
    train_sizes: List[int] = field(default_factory=lambda: list(FULL_SIZES))
    n_test: int = N_TEST
    node_scheme: Optional[NodeScheme] = None  # None -> default_scheme(dim)
    seed: int = 0

    def __post_init__(self):
        if list(self.train_sizes) != sorted(self.train_sizes):
            raise ValueError("train_sizes must be ascending")
        if self.n_test < 1:
            raise ValueError("n_test must be >= 1")

    @property
    def scheme(self) -> NodeScheme:
        return self.node_scheme or default_scheme(self.function.dim)

    def nodes(self, n: int) -> NodeSet:
        return make_nodes(self.function.dim, n, self.scheme, stable_seed(self.seed, "nodes", self.function.name, n))

    def test_set(self) -> np.ndarray:
        return test_points(self.function, self.n_test)
