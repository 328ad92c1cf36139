"""Replication experiments: run a configuration and collect its output tables."""

from __future__ import annotations

import logging

import numpy as np

from ..estimator import PipelineConfig, ReplicationSummary, replicate, run_pipeline
from ..kernels.rung import RunConfig
from ..ladder import ScheduleSpec
from ..models import get_model
from .config import ExperimentConfig
from .io import OutputBundle, curve_rows

log = logging.getLogger(__name__)

#: Settings that do not affect results and are left out of written bundles.
_VOLATILE = ("out", "workers")


def pipeline_config(cfg: ExperimentConfig, n: int) -> PipelineConfig:
    return PipelineConfig(
        schedule=ScheduleSpec(cfg.schedule, n, cfg.pf_power),
        run=RunConfig(cfg.iters, cfg.burn),
        estimators=frozenset(cfg.estimators),
    )


def long_run_truth(model, seed: int, rungs: int, iterations: int, burn: float = 0.2,
                   pf_power: float = 5.0) -> float:
    """Corrected-rule estimate from one long powered-fraction run."""
    config = PipelineConfig(ScheduleSpec("pf", rungs, pf_power), RunConfig(iterations, burn),
                            frozenset({"modified"}))
    report, _ = run_pipeline(model, config, np.random.default_rng(np.random.SeedSequence([seed, rungs, 0])))
    return report.log_z_modified


def resolve_truth(cfg: ExperimentConfig, model) -> float:
    if cfg.truth is not None:
        return float(cfg.truth)
    if cfg.recompute_truth:
        log.info("recomputing truth for %s (%d rungs x %d iterations)", cfg.model, cfg.truth_rungs, cfg.truth_iters)
        return long_run_truth(model, cfg.seed, cfg.truth_rungs, cfg.truth_iters)
    if model.reference_log_evidence is None:
        raise ValueError(f"model {cfg.model} has no stored truth; pass --truth or --recompute-truth")
    return float(model.reference_log_evidence)


def summary_rows(cfg: ExperimentConfig, n: int, summary: ReplicationSummary) -> list[dict]:
    rows = []
    for estimator, s in summary.table().items():
        rows.append({"model": cfg.model, "schedule": cfg.schedule, "estimator": estimator, "n": n,
                     "replicates": s.replicates, "iterations": cfg.iters, "truth": summary.truth,
                     "mean": s.mean, "bias": s.bias, "se": s.se, "rmse": s.rmse})
    return rows


def report_rows(cfg: ExperimentConfig, n: int, summary: ReplicationSummary) -> list[dict]:
    return [{"model": cfg.model, "schedule": cfg.schedule, "n": n, "replicate": i,
             "log_z_standard": r.log_z_standard, "log_z_modified": r.log_z_modified,
             "log_z_stepping_stone": r.log_z_stepping_stone, "lower_bound": r.lower_bound,
             "upper_bound": r.upper_bound, "s_n": r.s_n}
            for i, r in enumerate(summary.reports)]


def run_experiment(cfg: ExperimentConfig) -> OutputBundle:
    """Replicate the pipeline ``cfg.reps`` times for every rung count in ``cfg.rungs``.

    Replicate ``i`` at rung count ``n`` draws from a stream seeded by
    ``(seed, n)`` and the replicate index, so results do not depend on the
    number of workers or on which other rung counts are run.
    """
    model = get_model(cfg.model)
    truth = resolve_truth(cfg, model)
    config_doc = {k: v for k, v in cfg.to_dict().items() if k not in _VOLATILE}
    config_doc["truth"] = truth
    bundle = OutputBundle(config=config_doc)
    for n in cfg.rungs:
        log.info("%s %s n=%d: %d replicates", cfg.model, cfg.schedule, n, cfg.reps)
        summary = replicate(model, pipeline_config(cfg, n), cfg.reps, truth, [cfg.seed, n],
                            workers=cfg.workers, keep_curves=True)
        bundle.summary.extend(summary_rows(cfg, n, summary))
        bundle.reports.extend(report_rows(cfg, n, summary))
        kept = summary.curves if cfg.all_curves else summary.curves[:1]
        for i, curve in enumerate(kept):
            key = {"model": cfg.model, "schedule": cfg.schedule, "n": n, "replicate": i}
            bundle.curves.extend({**key, **row} for row in curve_rows(curve))
    return bundle


def format_summary(rows: list[dict]) -> str:
    """Fixed-width table of the summary rows."""
    head = f"{'model':<9} {'schedule':<8} {'estimator':<14} {'n':>5} {'reps':>5} " \
           f"{'mean':>12} {'bias':>10} {'se':>9} {'rmse':>9}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r['model']:<9} {r['schedule']:<8} {r['estimator']:<14} {r['n']:>5} "
                     f"{r['replicates']:>5} {r['mean']:>12.4f} {r['bias']:>10.5f} "
                     f"{r['se']:>9.5f} {r['rmse']:>9.5f}")
    return "\n".join(lines)
