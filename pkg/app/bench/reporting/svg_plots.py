# app/bench/reporting/svg_plots.py

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402

from app.bench.models import RunRecord  # noqa: E402
from app.errors import NoValidRecords  # noqa: E402
from app.optimize.models import TuneMethod  # noqa: E402

logger = logging.getLogger(__name__)

METHOD_LABELS = {
    TuneMethod.GRID_FULL: "Rippa",
    TuneMethod.GRID_NYSTROM: "Rippa + Nystrom",
    TuneMethod.GD_FULL: "GD",
    TuneMethod.GD_NYSTROM: "GD + Nystrom",
}
METHOD_MARKERS = {
    TuneMethod.GRID_FULL: "o",
    TuneMethod.GRID_NYSTROM: "s",
    TuneMethod.GD_FULL: "^",
    TuneMethod.GD_NYSTROM: "D",
}

# fixed ids and no timestamp -> byte-identical output for identical input
SVG_RC = {"svg.hashsalt": "rbftune", "svg.fonttype": "path"}


def _series(records: Sequence[RunRecord], field: str) -> Dict[TuneMethod, List[RunRecord]]:
    out: Dict[TuneMethod, List[RunRecord]] = {}
    for r in records:
        y = getattr(r, field)
        if math.isfinite(y) and y > 0:
            out.setdefault(r.method, []).append(r)
    return {m: sorted(rs, key=lambda r: r.n) for m, rs in out.items()}


def _plot(function: str, records: Sequence[RunRecord], field: str, ylabel: str, path: Path) -> Path:
    fig = Figure(figsize=(6.0, 4.5))
    ax = fig.add_subplot(1, 1, 1)
    for method, rs in _series(records, field).items():
        (line,) = ax.plot(
            [r.n for r in rs],
            [getattr(r, field) for r in rs],
            marker=METHOD_MARKERS[method],
            label=METHOD_LABELS[method],
        )
        line.set_gid(f"series-{method.value}")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel(ylabel)
    ax.set_title(function)
    ax.grid(True, which="both", alpha=0.3)
    if ax.lines:
        ax.legend()
    fig.tight_layout()

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with matplotlib.rc_context(SVG_RC):
            fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e
    logger.info(f"[plot] wrote {path}")
    return path


def emit_plots(records: Sequence[RunRecord], out_dir) -> List[Path]:
    """
    Per function: <name>_accuracy.svg (RMSE vs N) and <name>_timing.svg (wall ms vs N),
    log-log, one series per method. Failed records are dropped first.
    """
    ok = [r for r in records if r.ok]
    if not ok:
        raise NoValidRecords("no successful records to plot")

    by_function: Dict[str, List[RunRecord]] = {}
    for r in ok:
        by_function.setdefault(r.function, []).append(r)

    out = Path(out_dir)
    paths: List[Path] = []
    for name, rs in by_function.items():
        paths.append(_plot(name, rs, "rmse", "RMS error", out / f"{name}_accuracy.svg"))
        paths.append(_plot(name, rs, "wall_time_ms", "tuning wall time (ms)", out / f"{name}_timing.svg"))
    return paths
