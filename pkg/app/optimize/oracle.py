# app/optimize/oracle.py

from __future__ import annotations

import logging
from typing import Tuple

import numpy as np

from app.errors import AllEvaluationsInvalid, SingularSystem
from app.rbf.kernel import fit, rms_error
from app.rbf.models import KernelSpec, NodeSet

logger = logging.getLogger(__name__)


def rmse_optimal_epsilon(
    nodes: NodeSet,
    values,
    test_points,
    true_values,
    jitter: float,
    *,
    lo: float = 1e-3,
    hi: float = 1e3,
    count: int = 200,
) -> Tuple[float, float, np.ndarray, np.ndarray]:
    """
    The eps minimizing test-set RMS error over `count` log-spaced values, by direct fits.
    Returns (eps*, rmse*, eps grid, rmse per grid point; nan where the fit failed).
    """
    eps_grid = np.geomspace(lo, hi, count)
    rmse = np.full(count, np.nan)
    for i, eps in enumerate(eps_grid):
        try:
            model = fit(nodes, values, KernelSpec(epsilon=float(eps), jitter=jitter))
        except SingularSystem:
            continue
        rmse[i] = rms_error(model, test_points, true_values)

    ok = np.isfinite(rmse)
    if not ok.any():
        raise AllEvaluationsInvalid("every oracle fit failed")
    best = int(np.nanargmin(rmse))
    logger.debug(f"[oracle] eps*={eps_grid[best]:.6g} rmse*={rmse[best]:.3e}")
    return float(eps_grid[best]), float(rmse[best]), eps_grid, rmse
