"""Experiment configuration: defaults, JSON config files and validation."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping, Optional

from ..estimator import ESTIMATORS, parse_estimators
from ..models import MODEL_IDS

#: Long-run settings for recomputing a benchmark truth.
TRUTH_RUNGS = 2000
TRUTH_ITERATIONS = 20000


class ConfigError(ValueError):
    """Invalid experiment configuration; ``field`` names the offending setting."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "radiata1"
    schedule: str = "pf"
    pf_power: float = 5.0
    rungs: tuple = (10,)
    iters: int = 10000
    burn: float = 0.2
    reps: int = 100
    estimators: tuple = ESTIMATORS
    seed: int = 1
    out: Optional[str] = None
    format: str = "csv"
    truth: Optional[float] = None
    recompute_truth: bool = False
    truth_rungs: int = TRUTH_RUNGS
    truth_iters: int = TRUTH_ITERATIONS
    workers: int = 1
    all_curves: bool = False

    def __post_init__(self):
        validate(self)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rungs"] = list(self.rungs)
        d["estimators"] = list(self.estimators)
        return d


def _positive_int(name: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
        raise ConfigError(name, f"must be a positive integer, got {value!r}")
    return value


def validate(cfg: ExperimentConfig) -> None:
    if cfg.model not in MODEL_IDS:
        raise ConfigError("model", f"unknown model {cfg.model!r}; choose from {', '.join(MODEL_IDS)}")
    if cfg.schedule not in ("pf", "adaptive"):
        raise ConfigError("schedule", f"must be 'pf' or 'adaptive', got {cfg.schedule!r}")
    if not isinstance(cfg.pf_power, (int, float)) or not cfg.pf_power > 0:
        raise ConfigError("pf_power", f"must be positive, got {cfg.pf_power!r}")
    if not cfg.rungs:
        raise ConfigError("rungs", "at least one rung count is required")
    for n in cfg.rungs:
        _positive_int("rungs", n)
    if _positive_int("iters", cfg.iters) < 2:
        raise ConfigError("iters", f"need at least 2 iterations per rung, got {cfg.iters}")
    if isinstance(cfg.burn, bool) or not isinstance(cfg.burn, (int, float)) or not 0.0 <= cfg.burn <= 1.0:
        raise ConfigError("burn", f"must lie in [0, 1], got {cfg.burn!r}")
    if _positive_int("reps", cfg.reps) < 2:
        raise ConfigError("reps", f"need at least 2 replicates, got {cfg.reps}")
    try:
        est = parse_estimators(cfg.estimators)
    except ValueError as exc:
        raise ConfigError("estimators", str(exc)) from None
    object.__setattr__(cfg, "estimators", tuple(e for e in ESTIMATORS if e in est))
    if isinstance(cfg.seed, bool) or not isinstance(cfg.seed, int) or not 0 <= cfg.seed < 2 ** 64:
        raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {cfg.seed!r}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format", f"must be 'csv' or 'json', got {cfg.format!r}")
    if cfg.truth is not None and (isinstance(cfg.truth, bool) or not isinstance(cfg.truth, (int, float))
                                  or not math.isfinite(cfg.truth)):
        raise ConfigError("truth", f"must be a finite number, got {cfg.truth!r}")
    _positive_int("truth_rungs", cfg.truth_rungs)
    _positive_int("truth_iters", cfg.truth_iters)
    _positive_int("workers", cfg.workers)


def parse_rungs(text: str) -> tuple:
    """``"10,20,50"`` -> ``(10, 20, 50)``."""
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise ConfigError("rungs", f"expected comma-separated integers, got {text!r}") from None


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}


def load_config_file(path: str) -> dict:
    """Read a JSON object of ``ExperimentConfig`` fields (hyphens or underscores)."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"malformed JSON in {path}: {exc.msg} (line {exc.lineno})") from None
    if not isinstance(raw, dict):
        raise ConfigError("config", f"{path} must contain a JSON object")
    out = {}
    for key, value in raw.items():
        name = key.replace("-", "_")
        if name not in _FIELD_NAMES:
            raise ConfigError(key, f"unknown setting in {path}")
        if name == "rungs":
            value = parse_rungs(value) if isinstance(value, str) else tuple(value) if isinstance(value, list) else (value,)
        elif name == "estimators" and isinstance(value, list):
            value = tuple(value)
        out[name] = value
    return out


def merge(file_values: Mapping[str, Any], flag_values: Mapping[str, Any]) -> ExperimentConfig:
    """Defaults, then the config file, then explicit flags."""
    merged = {**file_values, **{k: v for k, v in flag_values.items() if v is not None}}
    try:
        return ExperimentConfig(**merged)
    except TypeError as exc:
        raise ConfigError("config", str(exc)) from None
