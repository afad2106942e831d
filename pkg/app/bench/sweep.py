# app/bench/sweep.py

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence

from app.bench.config import BenchConfig
from app.bench.models import RunRecord
from app.errors import TooManyLandmarks
from app.landmarks.models import StabilityReport
from app.landmarks.stability import STABILITY_RUNS, stability_experiment
from app.optimize.models import TuneMethod, TuneResult
from app.optimize.tuner import TuneSettings, tune_shape_parameter
from app.rbf.kernel import fit, rms_error
from app.rbf.models import KernelSpec
from app.testbed.functions import eval_function, get_function
from app.testbed.nodes import ExperimentDesign, NodeScheme, make_nodes
from app.utils.common import _json_safe
from app.utils.seeding import stable_seed
from app.utils.timing import median_wall_time, timed

logger = logging.getLogger(__name__)

STABILITY_DIMS = [1, 2, 3]
STABILITY_SIZES = [1024, 2048, 4096, 8192]
STABILITY_MS = [50, 100, 200, 400]


class SweepCell(NamedTuple):
    function: str
    method: TuneMethod
    n: int


def sweep_cells(config: BenchConfig) -> List[SweepCell]:
    """Cells in declared config order: function, then method, then n."""
    return [
        SweepCell(fname, method, n)
        for fname in config.functions
        for method in config.methods
        for n in config.train_sizes(method)
    ]


def cell_seed(base_seed: int, cell: SweepCell) -> int:
    return stable_seed(base_seed, cell.function, cell.method.value, cell.n)


def tune_cell(cell: SweepCell, config: BenchConfig) -> RunRecord:
    """Tune, refit at eps*, score on the test set. Never raises; failures become records."""
    f = get_function(cell.function)
    m = config.m if cell.method.uses_nystrom else None
    seed = cell_seed(config.base_seed, cell)

    try:
        design = ExperimentDesign(f, config.train_sizes(cell.method), n_test=config.n_test, seed=config.base_seed)
        nodes = design.nodes(cell.n)
        values = eval_function(f, nodes.points)
        jitter = config.jitter(f.dim)
        settings = TuneSettings(
            jitter=jitter,
            lambda_reg=config.nystrom_lambda,
            m=config.m,
            seed=seed,
            grid=config.grid,
            gd=config.gd,
        )

        def tune() -> TuneResult:
            return tune_shape_parameter(nodes, values, cell.method, settings)

        if config.record_timing:
            result, secs = median_wall_time(tune, config.repetitions)
            wall_ms = secs * 1e3
        else:
            result, _ = timed(tune)
            wall_ms = math.nan

        model = fit(nodes, values, KernelSpec(epsilon=result.epsilon_star, jitter=jitter))
        x_test = design.test_set()
        rmse = rms_error(model, x_test, eval_function(f, x_test))

        record = RunRecord(
            function=f.name,
            dim=f.dim,
            method=cell.method,
            n=cell.n,
            m=m,
            epsilon_star=result.epsilon_star,
            loocv_objective=result.objective_star,
            rmse=rmse,
            wall_time_ms=wall_ms,
            evaluations=result.evaluations,
            seed=seed,
        )
        logger.info(
            f"[sweep] ok {f.name} {cell.method.value} n={cell.n} eps*={result.epsilon_star:.6g} "
            f"rmse={rmse:.3e} evals={result.evaluations} stop={result.stop_reason or '-'}"
        )
        return record
    except Exception as e:
        logger.exception(f"[sweep] failed {cell.function} {cell.method.value} n={cell.n}: {e}")
        return RunRecord.failed(f.name, f.dim, cell.method, cell.n, m, seed, e)


def run_sweep(config: BenchConfig) -> List[RunRecord]:
    cells = sweep_cells(config)
    logger.info(f"[sweep] started cells={len(cells)} workers={config.workers} timing={config.record_timing}")

    def run(cell: SweepCell) -> RunRecord:
        return tune_cell(cell, config)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(run, cells))  # map keeps declared order
    else:
        records = [run(c) for c in cells]

    stats: Dict[str, int] = {"cells": len(records), "ok": 0, "failed": 0}
    for r in records:
        stats["ok" if r.ok else "failed"] += 1
    logger.info(f"[sweep] done stats={stats}")
    return records


def write_config_echo(config: BenchConfig, out_dir) -> Path:
    """Write the resolved config next to the results as config.json."""
    path = Path(out_dir) / "config.json"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(_json_safe(config), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot write config echo {path}: {e}") from e
    return path


def run_stability(
    dims: Sequence[int] = STABILITY_DIMS,
    sizes: Sequence[int] = STABILITY_SIZES,
    ms: Sequence[int] = STABILITY_MS,
    base_seed: int = 0,
    *,
    runs: int = STABILITY_RUNS,
    workers: Optional[int] = None,
) -> List[StabilityReport]:
    """One StabilityReport per (dim, n, m) on uniform nodes, in that nesting order."""
    if max(ms) > min(sizes):
        raise TooManyLandmarks(f"every m must be <= every n, got max m={max(ms)} and min n={min(sizes)}")

    reports: List[StabilityReport] = []
    for dim in dims:
        for n in sizes:
            nodes = make_nodes(dim, n, NodeScheme.UNIFORM, stable_seed(base_seed, "stability", dim, n))
            for m in ms:
                reports.append(stability_experiment(nodes, m, base_seed, runs=runs, workers=workers))
    return reports
