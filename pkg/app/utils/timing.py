# app/utils/timing.py

import time
from typing import Callable, List, Tuple, TypeVar

import numpy as np

T = TypeVar("T")


def timed(fn: Callable[[], T]) -> Tuple[T, float]:
    """Run fn once; return (result, wall seconds)."""
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def median_wall_time(fn: Callable[[], T], repetitions: int) -> Tuple[T, float]:
    """
    Run fn `repetitions` times and return (first result, median wall seconds).
    fn must be deterministic; only the first result is kept.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    first = None
    times: List[float] = []
    for i in range(repetitions):
        out, dt = timed(fn)
        if i == 0:
            first = out
        times.append(dt)
    return first, float(np.median(times))
