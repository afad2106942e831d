# app/bench/reporting/csv_report.py

from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Sequence

import pandas as pd

from app.bench.models import RunRecord
from app.landmarks.models import StabilityReport
from app.optimize.models import TuneMethod

logger = logging.getLogger(__name__)

RUN_COLUMNS = [
    "function", "dim", "method", "n", "m", "epsilon_star", "loocv_objective",
    "rmse", "wall_time_ms", "evaluations", "seed", "status",
]
STABILITY_COLUMNS = ["dim", "n", "m", "runs", "mean_nmi", "std_nmi", "min_nmi", "max_nmi"]


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _record_row(r: RunRecord) -> List[str]:
    return [
        r.function,
        str(r.dim),
        r.method.value,
        str(r.n),
        "" if r.m is None else str(r.m),
        _fmt_float(r.epsilon_star),
        _fmt_float(r.loocv_objective),
        _fmt_float(r.rmse),
        _fmt_float(r.wall_time_ms),
        str(r.evaluations),
        str(r.seed),
        r.status,
    ]


def _write(df: pd.DataFrame, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e
    logger.info(f"[csv] wrote {path} rows={len(df)}")
    return path


def emit_csv(records: Sequence[RunRecord], path) -> Path:
    """One row per record; floats with 17 significant digits; header-only when empty."""
    df = pd.DataFrame([_record_row(r) for r in records], columns=RUN_COLUMNS, dtype=str)
    return _write(df, Path(path))


def read_records(path) -> List[RunRecord]:
    path = Path(path)
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot read {path}: {e}") from e
    missing = [c for c in RUN_COLUMNS if c not in df.columns]
    if missing:
        raise ValueError(f"{path} is missing columns {missing}")

    return [
        RunRecord(
            function=row["function"],
            dim=int(row["dim"]),
            method=TuneMethod(row["method"]),
            n=int(row["n"]),
            m=int(row["m"]) if row["m"] else None,
            epsilon_star=float(row["epsilon_star"]),
            loocv_objective=float(row["loocv_objective"]),
            rmse=float(row["rmse"]),
            wall_time_ms=float(row["wall_time_ms"]),
            evaluations=int(row["evaluations"]),
            seed=int(row["seed"]),
            status=row["status"],
        )
        for row in df.to_dict(orient="records")
    ]


def emit_stability_csv(reports: Sequence[StabilityReport], path) -> Path:
    rows = [
        [str(r.dim), str(r.n), str(r.m), str(len(r.seeds)), _fmt_float(r.mean_nmi),
         _fmt_float(r.std_nmi), _fmt_float(r.min_nmi), _fmt_float(r.max_nmi)]
        for r in reports
    ]
    df = pd.DataFrame(rows, columns=STABILITY_COLUMNS, dtype=str)
    return _write(df, Path(path))
