"""Experiment harness: configuration, replication runs, output files and timing."""

from .cli import main
from .config import ConfigError, ExperimentConfig
from .experiment import run_experiment
from .io import OutputBundle, emit_curve, read_bundle, read_curve, write_bundle
from .timing import scheme_configs, timing_probe

__all__ = [
    "main", "ConfigError", "ExperimentConfig", "run_experiment", "OutputBundle", "emit_curve",
    "read_bundle", "read_curve", "write_bundle", "scheme_configs", "timing_probe",
]
