# app/testbed/functions.py

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from app.errors import DimensionMismatch


@dataclass(frozen=True)
class TestFunction:
    name: str
    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]  # (n, dim) -> (n,)


def _f1(x):
    return np.exp(np.sin(np.pi * x[:, 0]))


def _f2(x):
    return 1.0 / (1.0 + 16.0 * x[:, 0] ** 2)


def _boundary_factor(t, scale):
    # vanishes at t=0 and t=1, symmetric about 0.5
    return 1.0 + np.exp(-1.0 / scale) - np.exp(-t / scale) - np.exp((t - 1.0) / scale)


def _f3(x):
    return _boundary_factor(x[:, 0], 1.0) * _boundary_factor(x[:, 1], 1.0)


def _f4(x):
    return _boundary_factor(x[:, 0], 0.1) * _boundary_factor(x[:, 1], 0.1)


def _f5(x):
    # Franke's function
    a, b = 9.0 * x[:, 0], 9.0 * x[:, 1]
    return (
        0.75 * np.exp(-((a - 2.0) ** 2 + (b - 2.0) ** 2) / 4.0)
        + 0.75 * np.exp(-((a + 1.0) ** 2) / 49.0 - (b + 1.0) / 10.0)
        + 0.5 * np.exp(-((a - 7.0) ** 2 + (b - 3.0) ** 2) / 4.0)
        - 0.2 * np.exp(-((a - 4.0) ** 2) - (b - 7.0) ** 2)
    )


def _f6(x):
    return np.ones(x.shape[0])


def _f7(x):
    x1, x2, x3 = x[:, 0], x[:, 1], x[:, 2]
    return np.sin(x1 ** 2 + 2.0 * x2 ** 2) - np.sin(2.0 * x1 ** 2 + (x2 - 0.5) ** 2 + x3 ** 2)


def _f8(x):
    x1, x2, x3 = x[:, 0], x[:, 1], x[:, 2]
    return (np.sin(2.0 * np.pi * (x1 ** 2 + 2.0 * x2 ** 2))
            - np.sin(2.0 * np.pi * (2.0 * x1 ** 2 + (x2 - 0.5) ** 2 + x3 ** 2)))


TEST_FUNCTIONS: Dict[str, TestFunction] = {
    f.name: f
    for f in (
        TestFunction("f1", 1, _f1),
        TestFunction("f2", 1, _f2),
        TestFunction("f3", 2, _f3),
        TestFunction("f4", 2, _f4),
        TestFunction("f5", 2, _f5),
        TestFunction("f6", 3, _f6),
        TestFunction("f7", 3, _f7),
        TestFunction("f8", 3, _f8),
    )
}


def get_function(name: str) -> TestFunction:
    try:
        return TEST_FUNCTIONS[name]
    except KeyError:
        raise KeyError(f"unknown test function {name!r}; choose from {sorted(TEST_FUNCTIONS)}") from None


def function_names() -> List[str]:
    return list(TEST_FUNCTIONS)


def eval_function(f: TestFunction, points) -> np.ndarray:
    x = np.asarray(points, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None] if f.dim == 1 else x[None, :]
    if x.ndim != 2 or x.shape[1] != f.dim:
        raise DimensionMismatch(f"{f.name} is {f.dim}D, got points of shape {x.shape}")
    return f.evaluator(x)
