# app/optimize/tuner.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.landmarks.kmeans import kmeanspp_select
from app.landmarks.models import LandmarkSet
from app.optimize.descent import gradient_descent
from app.optimize.grid import grid_search
from app.optimize.initial import initial_epsilon
from app.optimize.models import GdSpec, GridSpec, Objective, TuneMethod, TuneResult
from app.rbf.loocv import LoocvEvaluation, loocv_full_closed_form, loocv_nystrom
from app.rbf.models import KernelSpec, NodeSet

logger = logging.getLogger(__name__)

NYSTROM_LAMBDA = 1e-6
FULL_JITTER_1D = 1e-14
FULL_JITTER_ND = 1e-10
DEFAULT_M = 200


def default_jitter(dim: int) -> float:
    return FULL_JITTER_1D if dim == 1 else FULL_JITTER_ND


def full_objective(nodes: NodeSet, values: np.ndarray, jitter: float) -> Objective:
    def objective(eps: float) -> LoocvEvaluation:
        return loocv_full_closed_form(nodes, values, KernelSpec(epsilon=eps, jitter=jitter))
    return objective


def nystrom_objective(nodes: NodeSet, values: np.ndarray, landmarks: LandmarkSet, lambda_reg: float) -> Objective:
    def objective(eps: float) -> LoocvEvaluation:
        return loocv_nystrom(nodes, values, landmarks, eps, lambda_reg)
    return objective


@dataclass(frozen=True)
class TuneSettings:
    jitter: Optional[float] = None          # full path; None -> by dimension
    lambda_reg: float = NYSTROM_LAMBDA      # Nystrom path
    m: int = DEFAULT_M
    seed: int = 0
    grid: GridSpec = GridSpec()
    gd: GdSpec = GdSpec()
    workers: Optional[int] = None


def tune_shape_parameter(
    nodes: NodeSet,
    values,
    method: TuneMethod,
    settings: TuneSettings = TuneSettings(),
) -> TuneResult:
    """Build the LOOCV objective `method` asks for and minimize it."""
    f = np.asarray(values, dtype=np.float64).reshape(-1)
    if method.uses_nystrom:
        landmarks = kmeanspp_select(nodes, settings.m, settings.seed)
        objective = nystrom_objective(nodes, f, landmarks, settings.lambda_reg)
    else:
        jitter = default_jitter(nodes.dim) if settings.jitter is None else settings.jitter
        objective = full_objective(nodes, f, jitter)

    if method.uses_grid:
        return grid_search(objective, settings.grid, method=method, workers=settings.workers)

    eps0 = initial_epsilon(nodes, settings.seed)
    logger.debug(f"[tune] {method.value} n={nodes.n} dim={nodes.dim} eps0={eps0:.6g}")
    return gradient_descent(objective, eps0, settings.gd, method=method,
                            parallel_stencil=bool(settings.workers and settings.workers > 1))
