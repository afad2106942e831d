# app/optimize/grid.py

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.errors import AllEvaluationsInvalid
from app.optimize.models import GridSpec, Objective, TracePoint, TuneMethod, TuneResult
from app.rbf.loocv import LoocvEvaluation

logger = logging.getLogger(__name__)


def coarse_grid(grid: GridSpec) -> np.ndarray:
    # geomspace pins both endpoints exactly
    return np.geomspace(grid.coarse_lo, grid.coarse_hi, grid.coarse_count)


def refine_grid(grid: GridSpec, eps_coarse: float) -> np.ndarray:
    return np.linspace(grid.refine_lo_factor * eps_coarse, grid.refine_hi_factor * eps_coarse, grid.refine_count)


def _evaluate_all(objective: Objective, eps: Sequence[float], workers: Optional[int]) -> List[LoocvEvaluation]:
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(objective, [float(e) for e in eps]))
    return [objective(float(e)) for e in eps]


def _argmin_valid(evals: Sequence[LoocvEvaluation]) -> Optional[int]:
    best = None
    for i, ev in enumerate(evals):
        # strict < keeps the first index among equal minima
        if ev.valid and (best is None or ev.objective < evals[best].objective):
            best = i
    return best


def grid_search(
    objective: Objective,
    grid: GridSpec = GridSpec(),
    *,
    method: TuneMethod = TuneMethod.GRID_FULL,
    workers: Optional[int] = None,
) -> TuneResult:
    """
    Stage 1: coarse_count log-spaced eps on [coarse_lo, coarse_hi].
    Stage 2: refine_count linear eps on [lo_factor * eps_c, hi_factor * eps_c].
    The result is the best valid point across both stages.
    """
    t0 = time.perf_counter()

    coarse = coarse_grid(grid)
    stage1 = _evaluate_all(objective, coarse, workers)
    i1 = _argmin_valid(stage1)
    if i1 is None:
        raise AllEvaluationsInvalid(f"no valid objective on the {len(coarse)}-point coarse grid")
    eps_c = float(coarse[i1])

    fine = refine_grid(grid, eps_c)
    stage2 = _evaluate_all(objective, fine, workers)

    evals: List[LoocvEvaluation] = stage1 + stage2
    best = _argmin_valid(evals)
    trace = [TracePoint(ev.epsilon, ev.objective, ev.valid) for ev in evals]
    n_invalid = sum(1 for ev in evals if not ev.valid)
    logger.debug(
        f"[grid] eps_coarse={eps_c:.6g} eps*={evals[best].epsilon:.6g} "
        f"L*={evals[best].objective:.6e} invalid={n_invalid}/{len(evals)}"
    )
    return TuneResult(
        epsilon_star=evals[best].epsilon,
        objective_star=float(evals[best].objective),
        method=method,
        evaluations=len(evals),
        iterations=2,
        wall_time=time.perf_counter() - t0,
        trace=trace,
        stop_reason="grid",
    )


def stage_windows(result: TuneResult, grid: GridSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Split a grid_search trace into its coarse and refine epsilon arrays."""
    eps = np.array([p.epsilon for p in result.trace])
    return eps[: grid.coarse_count], eps[grid.coarse_count:]
