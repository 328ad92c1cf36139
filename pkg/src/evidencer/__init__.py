"""Estimate Bayesian evidence with power posteriors and stepping stones."""

from .estimator import PipelineConfig, ReplicationSummary, error_stats, replicate, run_pipeline
from .kernels.rung import RunConfig, run_rung
from .ladder import ScheduleSpec, adaptive_build, pf_schedule
from .quadrature import (DevianceCurve, EvidenceReport, Ladder, RungEstimate, corrected_trapezium,
                         sn_bounds, stepping_stone, trapezium)

__version__ = "0.1.0"

__all__ = [
    "PipelineConfig", "ReplicationSummary", "error_stats", "replicate", "run_pipeline",
    "RunConfig", "run_rung", "ScheduleSpec", "adaptive_build", "pf_schedule",
    "DevianceCurve", "EvidenceReport", "Ladder", "RungEstimate", "corrected_trapezium",
    "sn_bounds", "stepping_stone", "trapezium",
]
