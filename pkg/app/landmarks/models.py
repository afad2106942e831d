# app/landmarks/models.py

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np


@dataclass(frozen=True, eq=False)
class LandmarkSet:
    indices: np.ndarray      # (m,) distinct node indices
    assignments: np.ndarray  # (N,) cluster label per node, in [0, m)
    inertia: float
    seed: int

    def __post_init__(self):
        for name in ("indices", "assignments"):
            a = np.array(getattr(self, name), dtype=np.intp, copy=True).reshape(-1)
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def m(self) -> int:
        return int(self.indices.shape[0])


@dataclass(frozen=True)
class StabilityReport:
    n: int
    m: int
    dim: int
    pair_nmis: List[float]
    mean_nmi: float
    std_nmi: float
    seeds: List[int] = field(default_factory=list)

    @property
    def min_nmi(self) -> float:
        return min(self.pair_nmis)

    @property
    def max_nmi(self) -> float:
        return max(self.pair_nmis)
