# app/bench/config.py

from __future__ import annotations

import configparser
import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from app.errors import ConfigError
from app.optimize.models import GdSpec, GridSpec, TuneMethod
from app.optimize.tuner import DEFAULT_M, FULL_JITTER_1D, FULL_JITTER_ND, NYSTROM_LAMBDA
from app.testbed.functions import TEST_FUNCTIONS, function_names
from app.testbed.nodes import EXTRA_TIER, FULL_SIZES, N_TEST, NYSTROM_SIZES
from app.utils.common import _parse_csv_list, _parse_int_list, _strip_inline_comment

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = "rbftune.ini"
SECTION = "RBFTUNE"
GRID_SECTION = "RBFTUNE_GRID"
GD_SECTION = "RBFTUNE_GD"


@dataclass(frozen=True)
class BenchConfig:
    functions: List[str] = field(default_factory=function_names)
    methods: List[TuneMethod] = field(default_factory=lambda: list(TuneMethod))
    full_sizes: List[int] = field(default_factory=lambda: list(FULL_SIZES))
    nystrom_sizes: List[int] = field(default_factory=lambda: list(NYSTROM_SIZES))
    m: int = DEFAULT_M
    base_seed: int = 0
    nystrom_lambda: float = NYSTROM_LAMBDA
    full_jitter_1d: float = FULL_JITTER_1D
    full_jitter_nd: float = FULL_JITTER_ND
    repetitions: int = 5
    workers: int = 1
    n_test: int = N_TEST
    output_dir: str = "results"
    record_timing: bool = True
    include_8192: bool = False
    grid: GridSpec = GridSpec()
    gd: GdSpec = GdSpec()

    def __post_init__(self):
        unknown = [f for f in self.functions if f not in TEST_FUNCTIONS]
        if unknown:
            raise ConfigError(f"unknown functions {unknown}; choose from {function_names()}")
        if not self.functions or not self.methods:
            raise ConfigError("functions and methods must be non-empty")
        for name in ("full_sizes", "nystrom_sizes"):
            sizes = getattr(self, name)
            if list(sizes) != sorted(sizes) or any(n < 2 for n in sizes):
                raise ConfigError(f"{name} must be ascending and >= 2, got {sizes}")
        if self.m < 1 or self.repetitions < 1 or self.workers < 1 or self.n_test < 1:
            raise ConfigError("m, repetitions, workers and n_test must all be >= 1")
        if self.nystrom_lambda <= 0 or self.full_jitter_1d < 0 or self.full_jitter_nd < 0:
            raise ConfigError("nystrom_lambda must be > 0 and jitters >= 0")

    def train_sizes(self, method: TuneMethod) -> List[int]:
        sizes = list(self.nystrom_sizes if method.uses_nystrom else self.full_sizes)
        if self.include_8192:
            sizes = sorted(set(sizes + [EXTRA_TIER]))
        return sizes

    def jitter(self, dim: int) -> float:
        return self.full_jitter_1d if dim == 1 else self.full_jitter_nd


# ------------------------
# INI helpers
# ------------------------

def _get_str(section: Optional[configparser.SectionProxy], key: str) -> Optional[str]:
    if section is None:
        return None
    v = _strip_inline_comment(section.get(key, fallback=""))
    return v or None


def _get_bool(section: Optional[configparser.SectionProxy], key: str, fallback: bool) -> bool:
    v = _get_str(section, key)
    if v is None:
        return fallback
    return v.lower() in {"1", "true", "yes", "y", "on"}


def _get_int(section: Optional[configparser.SectionProxy], key: str, fallback: int) -> int:
    v = _get_str(section, key)
    if v is None:
        return fallback
    try:
        return int(v)
    except Exception:
        logger.warning(f"[config] {key}={v!r} is not an integer, using {fallback}")
        return fallback


def _get_float(section: Optional[configparser.SectionProxy], key: str, fallback: float) -> float:
    v = _get_str(section, key)
    if v is None:
        return fallback
    try:
        return float(v)
    except ValueError as e:
        raise ConfigError(f"{key}={v!r} is not a number") from e


def _load_cfg(path: Path) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    cfg.optionxform = str.upper  # keys are upper-case
    if path.exists():
        cfg.read(path, encoding="utf-8")
        logger.info(f"[config] loaded {path}")
    else:
        logger.info(f"[config] {path} not found, using defaults")
    return cfg


def _section(cfg: configparser.ConfigParser, name: str) -> Optional[configparser.SectionProxy]:
    return cfg[name] if cfg.has_section(name) else None


def _spec_from_section(spec, section: Optional[configparser.SectionProxy]):
    if section is None:
        return spec
    updates: Dict[str, Any] = {}
    for f in fields(spec):
        key = f.name.upper()
        default = getattr(spec, f.name)
        if isinstance(default, int):
            updates[f.name] = _get_int(section, key, default)
        else:
            updates[f.name] = _get_float(section, key, default)
    try:
        return replace(spec, **updates)
    except ValueError as e:
        raise ConfigError(f"[{section.name}] {e}") from e


def _parse_methods(raw: Optional[List[str]], fallback: List[TuneMethod]) -> List[TuneMethod]:
    if raw is None:
        return fallback
    try:
        return [TuneMethod(x.lower()) for x in raw]
    except ValueError as e:
        raise ConfigError(f"unknown method in {raw}; choose from {[t.value for t in TuneMethod]}") from e


def resolve_config_path(explicit: Optional[str] = None) -> Path:
    return Path(explicit or os.getenv("RBFTUNE_ENV_PATH") or DEFAULT_CONFIG_PATH)


def load_config(path: Optional[str] = None, **overrides: Any) -> BenchConfig:
    """
    Build a BenchConfig from built-in defaults, then the INI file, then `overrides`
    (CLI flags; None values are ignored). RBFTUNE_OUTPUT_DIR beats the INI but not a flag.
    """
    load_dotenv()
    cfg = _load_cfg(resolve_config_path(path))
    sec = _section(cfg, SECTION)
    base = BenchConfig()

    try:
        values: Dict[str, Any] = dict(
            functions=_parse_csv_list(_get_str(sec, "FUNCTIONS")) or base.functions,
            methods=_parse_methods(_parse_csv_list(_get_str(sec, "METHODS")), base.methods),
            full_sizes=_parse_int_list(_get_str(sec, "FULL_SIZES")) or base.full_sizes,
            nystrom_sizes=_parse_int_list(_get_str(sec, "NYSTROM_SIZES")) or base.nystrom_sizes,
        )
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"malformed size list: {e}") from e

    values.update(
        m=_get_int(sec, "M", base.m),
        base_seed=_get_int(sec, "BASE_SEED", base.base_seed),
        nystrom_lambda=_get_float(sec, "NYSTROM_LAMBDA", base.nystrom_lambda),
        full_jitter_1d=_get_float(sec, "FULL_JITTER_1D", base.full_jitter_1d),
        full_jitter_nd=_get_float(sec, "FULL_JITTER_ND", base.full_jitter_nd),
        repetitions=_get_int(sec, "REPETITIONS", base.repetitions),
        workers=_get_int(sec, "WORKERS", base.workers),
        n_test=_get_int(sec, "N_TEST", base.n_test),
        output_dir=_get_str(sec, "OUTPUT_DIR") or base.output_dir,
        record_timing=_get_bool(sec, "RECORD_TIMING", base.record_timing),
        include_8192=_get_bool(sec, "INCLUDE_8192", base.include_8192),
        grid=_spec_from_section(base.grid, _section(cfg, GRID_SECTION)),
        gd=_spec_from_section(base.gd, _section(cfg, GD_SECTION)),
    )

    env_out = os.getenv("RBFTUNE_OUTPUT_DIR")
    if env_out:
        values["output_dir"] = env_out

    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return BenchConfig(**values)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from e
