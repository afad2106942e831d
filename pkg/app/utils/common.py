# app/utils/common.py

import enum
import math
from dataclasses import asdict, is_dataclass
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any, List, Optional

import numpy as np


def _strip_inline_comment(s: Optional[str]) -> str:
    if not s:
        return ""
    return s.split(";", 1)[0].strip()


def _parse_csv_list(s: Optional[str]) -> Optional[List[str]]:
    s = _strip_inline_comment(s)
    if not s:
        return None
    parts = [x.strip() for x in s.split(",") if x.strip()]
    return parts or None


def _parse_int_list(s: Optional[str]) -> Optional[List[int]]:
    parts = _parse_csv_list(s)
    if parts is None:
        return None
    return [int(p) for p in parts]


def _json_safe(obj: Any) -> Any:
    """Recursively convert to JSON-safe types."""
    if obj is None or isinstance(obj, (str, bool, int)):
        return obj
    if isinstance(obj, float):
        # json has no nan/inf
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, np.generic):
        return _json_safe(obj.item())
    if isinstance(obj, np.ndarray):
        return [_json_safe(v) for v in obj.tolist()]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Path):
        return str(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return _json_safe(asdict(obj))
    if isinstance(obj, (set, frozenset)):
        return sorted(_json_safe(v) for v in obj)
    if isinstance(obj, Mapping):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, Sequence):
        return [_json_safe(v) for v in obj]
    # last-resort
    return str(obj)
