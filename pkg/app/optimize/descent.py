# app/optimize/descent.py
"""
Gradient descent on theta = ln(eps) with a centered finite-difference gradient,
adaptive step size and backtracking.

A candidate is accepted only when its objective is valid and strictly lower than the
current one. Accepting grows the step (capped at eta_max); rejecting halves it and
retries within the same iteration, and running out of retries ends the run.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

from app.errors import InvalidStart
from app.optimize.models import GdSpec, Objective, TracePoint, TuneMethod, TuneResult
from app.rbf.loocv import LoocvEvaluation

logger = logging.getLogger(__name__)


def fd_step(eps: float, gd: GdSpec) -> float:
    return max(gd.fd_scale, gd.fd_scale * abs(eps))


def fd_gradient(
    objective: Objective,
    eps: float,
    gd: GdSpec,
    pool: Optional[ThreadPoolExecutor] = None,
) -> Tuple[Optional[float], LoocvEvaluation, LoocvEvaluation]:
    """dL/deps by centered differences; None when either stencil point is invalid.

    Callers keep eps - fd_step(eps, gd) > 0.
    """
    h = fd_step(eps, gd)
    if pool is not None:
        plus, minus = pool.map(objective, [eps + h, eps - h])
    else:
        plus, minus = objective(eps + h), objective(eps - h)
    if not (plus.valid and minus.valid):
        return None, plus, minus
    return (plus.objective - minus.objective) / (2.0 * h), plus, minus


def gradient_descent(
    objective: Objective,
    eps0: float,
    gd: GdSpec = GdSpec(),
    *,
    method: TuneMethod = TuneMethod.GD_FULL,
    parallel_stencil: bool = False,
) -> TuneResult:
    if not eps0 > 0:
        raise ValueError(f"eps0 must be > 0, got {eps0}")
    t0 = time.perf_counter()
    budget = gd.max_evaluations

    start = objective(float(eps0))
    evaluations = 1
    if not start.valid:
        raise InvalidStart(f"objective invalid at eps0={eps0:.6g} ({start.reason})")

    eps = float(eps0)
    loss = float(start.objective)
    theta = math.log(eps)
    eta = gd.eta0
    trace: List[TracePoint] = [TracePoint(eps, loss, True)]
    iterations = 0
    stop = "max_iters"

    pool = ThreadPoolExecutor(max_workers=2) if parallel_stencil else None
    try:
        while iterations < gd.max_iters:
            if evaluations + 2 > budget:
                stop = "budget"
                break
            if eps - fd_step(eps, gd) <= 0.0:
                # lower stencil point would leave eps > 0
                stop = "invalid_stencil"
                break
            grad_eps, _, _ = fd_gradient(objective, eps, gd, pool)
            evaluations += 2
            if grad_eps is None:
                stop = "invalid_stencil"
                break
            if abs(grad_eps) < gd.grad_tol:
                stop = "grad_tol"
                break
            grad_theta = eps * grad_eps

            accepted = False
            for _ in range(gd.max_retries + 1):
                if evaluations >= budget:
                    break
                theta_c = theta - eta * grad_theta
                eps_c = math.exp(theta_c)
                cand = objective(eps_c)
                evaluations += 1
                if cand.valid and cand.objective < loss:
                    accepted = True
                    break
                trace.append(TracePoint(eps_c, cand.objective, False))
                eta *= gd.shrink

            if not accepted:
                stop = "retries_exhausted"
                break

            prev = loss
            theta, eps, loss = theta_c, eps_c, float(cand.objective)
            trace.append(TracePoint(eps, loss, True))
            eta = min(gd.grow * eta, gd.eta_max)
            iterations += 1
            logger.debug(f"[gd] it={iterations} eps={eps:.6g} L={loss:.6e} eta={eta:.3g}")

            if abs(prev - loss) / max(abs(prev), 1e-300) < gd.rel_obj_tol:
                stop = "rel_obj_tol"
                break
    finally:
        if pool is not None:
            pool.shutdown()

    return TuneResult(
        epsilon_star=eps,
        objective_star=loss,
        method=method,
        evaluations=evaluations,
        iterations=iterations,
        wall_time=time.perf_counter() - t0,
        trace=trace,
        stop_reason=stop,
    )
