"""Wall-clock cost of the estimation schemes relative to each other.

The reference expectation is that the corrected rule and adaptive placement
add almost nothing to the cost of the plain powered-fraction trapezium run:
ratios of about 1.0000 (pf/standard), 1.0083 (pf/modified), 1.0076
(adaptive/standard) and 1.0121 (adaptive/modified) were reported for Radiata
Model 1 with 100 rungs.
"""

from __future__ import annotations

import time
from typing import Mapping

import numpy as np

from ..estimator import PipelineConfig, run_pipeline
from ..kernels.rung import RunConfig
from ..ladder import ScheduleSpec

SCHEMES = (("pf", "standard"), ("pf", "modified"), ("adaptive", "standard"), ("adaptive", "modified"))


def scheme_configs(rungs: int, iterations: int, burn: float = 0.2,
                   pf_power: float = 5.0) -> dict[str, PipelineConfig]:
    """The four schedule x estimator combinations, keyed ``"pf/standard"`` etc."""
    return {
        f"{kind}/{est}": PipelineConfig(ScheduleSpec(kind, rungs, pf_power), RunConfig(iterations, burn),
                                        frozenset({est}))
        for kind, est in SCHEMES
    }


def timing_probe(model, configs: Mapping[str, PipelineConfig], repeats: int = 1,
                 seed: int = 0) -> dict[str, float]:
    """Mean wall-clock time of each scheme divided by that of the first one.

    Each scheme runs ``repeats`` pipelines on the same seeds, interleaved. A tiny warm-up run
    is made first so that JIT compilation is not charged to any scheme.
    """
    if len(configs) < 2:
        raise ValueError("need ≥2 schemes to compare runtimes")
    if repeats < 1:
        raise ValueError(f"repeats must be positive, got {repeats}")
    warm = PipelineConfig(ScheduleSpec("pf", 2), RunConfig(10, 0.0), frozenset({"standard"}))
    run_pipeline(model, warm, np.random.default_rng(seed))
    # round-robin so slow drifts in machine load hit every scheme alike
    elapsed = dict.fromkeys(configs, 0.0)
    for r in range(repeats):
        for name, config in configs.items():
            t0 = time.perf_counter()
            run_pipeline(model, config, np.random.default_rng([seed, r]))
            elapsed[name] += time.perf_counter() - t0
    base = next(iter(elapsed.values()))
    return {name: e / base for name, e in elapsed.items()}
