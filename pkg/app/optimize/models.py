# app/optimize/models.py

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional

from app.rbf.loocv import LoocvEvaluation

Objective = Callable[[float], LoocvEvaluation]


class TuneMethod(enum.Enum):
    GRID_FULL = "grid_full"
    GRID_NYSTROM = "grid_nystrom"
    GD_FULL = "gd_full"
    GD_NYSTROM = "gd_nystrom"

    @property
    def uses_nystrom(self) -> bool:
        return self in (TuneMethod.GRID_NYSTROM, TuneMethod.GD_NYSTROM)

    @property
    def uses_grid(self) -> bool:
        return self in (TuneMethod.GRID_FULL, TuneMethod.GRID_NYSTROM)


@dataclass(frozen=True)
class GridSpec:
    coarse_count: int = 30
    coarse_lo: float = 1e-5
    coarse_hi: float = 1e3
    refine_count: int = 50
    refine_lo_factor: float = 0.5
    refine_hi_factor: float = 2.0

    def __post_init__(self):
        if not (0 < self.coarse_lo < self.coarse_hi):
            raise ValueError(f"need 0 < coarse_lo < coarse_hi, got {self.coarse_lo}, {self.coarse_hi}")
        if self.coarse_count < 2 or self.refine_count < 2:
            raise ValueError("grid counts must be >= 2")
        if not (0 < self.refine_lo_factor < self.refine_hi_factor):
            raise ValueError("need 0 < refine_lo_factor < refine_hi_factor")


@dataclass(frozen=True)
class GdSpec:
    eta0: float = 1.0
    eta_max: float = 5.0
    grow: float = 1.2
    shrink: float = 0.5
    max_retries: int = 15
    max_iters: int = 100
    grad_tol: float = 1e-8
    rel_obj_tol: float = 1e-12
    fd_scale: float = 1e-8

    def __post_init__(self):
        if not (0 < self.shrink < 1 < self.grow):
            raise ValueError("need 0 < shrink < 1 < grow")
        if not (self.eta_max >= self.eta0 > 0):
            raise ValueError("need eta_max >= eta0 > 0")
        if min(self.grad_tol, self.rel_obj_tol, self.fd_scale) <= 0:
            raise ValueError("tolerances must be > 0")
        if self.max_iters < 1 or self.max_retries < 0:
            raise ValueError("max_iters must be >= 1 and max_retries >= 0")

    @property
    def max_evaluations(self) -> int:
        return self.max_iters * (2 + self.max_retries + 1)


class TracePoint(NamedTuple):
    epsilon: float
    objective: Optional[float]  # None for an invalid evaluation
    accepted: bool = True


@dataclass(frozen=True)
class TuneResult:
    epsilon_star: float
    objective_star: float
    method: TuneMethod
    evaluations: int
    iterations: int
    wall_time: float
    trace: List[TracePoint] = field(default_factory=list)
    stop_reason: str = ""
