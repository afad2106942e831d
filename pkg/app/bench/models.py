# app/bench/models.py

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from app.optimize.models import TuneMethod

STATUS_OK = "ok"


@dataclass(frozen=True)
class RunRecord:
    function: str
    dim: int
    method: TuneMethod
    n: int
    m: Optional[int]
    epsilon_star: float
    loocv_objective: float
    rmse: float
    wall_time_ms: float
    evaluations: int
    seed: int
    status: str = STATUS_OK

    def __post_init__(self):
        if self.method.uses_nystrom != (self.m is not None):
            raise ValueError(f"m must be set iff the method is a Nystrom method (method={self.method.value}, m={self.m})")
        if not self.ok:
            return
        if not self.rmse >= 0:
            raise ValueError(f"rmse must be >= 0, got {self.rmse}")
        # nan means "not timed"
        if not (math.isnan(self.wall_time_ms) or self.wall_time_ms > 0):
            raise ValueError(f"wall_time_ms must be > 0, got {self.wall_time_ms}")

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    @classmethod
    def failed(cls, function: str, dim: int, method: TuneMethod, n: int, m: Optional[int],
               seed: int, error: BaseException) -> "RunRecord":
        nan = float("nan")
        return cls(
            function=function, dim=dim, method=method, n=n, m=m,
            epsilon_star=nan, loocv_objective=nan, rmse=nan, wall_time_ms=nan,
            evaluations=0, seed=seed, status=f"failed:{type(error).__name__}",
        )
