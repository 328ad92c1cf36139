"""Pima Indians diabetes: two logistic regressions with a vague Gaussian prior."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..kernels.metropolis_logistic import (LogisticData, LogisticState, log_likelihood, log_prior,
                                           metropolis_logistic_step, run_metropolis_logistic)
from .base import ModelSpec, load_dataset

PRIOR_PRECISION = 0.01

COVARIATES = {
    1: ("npreg", "glu", "bmi", "ped"),
    2: ("npreg", "glu", "bmi", "ped", "age"),
}

#: Long-run power posterior benchmarks (2000 rungs x 20000 iterations).
BENCHMARK_LOG_EVIDENCE = {1: -257.2342, 2: -259.8519}
#: Laplace approximations of the same quantities, for reference only.
LAPLACE_LOG_EVIDENCE = {1: -257.2588, 2: -259.8906}


def standardise(x: np.ndarray, ddof: int = 0) -> np.ndarray:
    """Centre each column and scale it to unit standard deviation."""
    x = np.asarray(x, dtype=float)
    return (x - x.mean(axis=0)) / x.std(axis=0, ddof=ddof)


@lru_cache(maxsize=None)
def _design(which: int) -> LogisticData:
    cols = load_dataset("pima.csv")
    Z = standardise(np.column_stack([cols[c] for c in COVARIATES[which]]))
    X = np.ascontiguousarray(np.column_stack([np.ones(Z.shape[0]), Z]))
    return LogisticData(X, cols["diabetes"].copy())


class LogisticRegressionModel(ModelSpec):
    def __init__(self, name: str, data: LogisticData, prior_precision: float = PRIOR_PRECISION,
                 reference_log_evidence: float | None = None):
        self.name = name
        self.data = data
        self.prior_precision = prior_precision
        self.reference_log_evidence = reference_log_evidence

    @property
    def dim(self) -> int:
        return self.data.dim

    def log_likelihood(self, state: LogisticState) -> float:
        return log_likelihood(state, self.data)

    def log_prior(self, state: LogisticState) -> float:
        return log_prior(state, self.prior_precision)

    def prior_sample(self, rng: np.random.Generator) -> LogisticState:
        return LogisticState(rng.standard_normal(self.dim) / math.sqrt(self.prior_precision))

    def step(self, state, t, rng):
        return metropolis_logistic_step(state, t, self.data, self.prior_precision, rng=rng)

    def run_chain(self, state, t, iterations, rng):
        return run_metropolis_logistic(state, t, self.data, self.prior_precision, iterations, rng)

    def validate_state(self, state) -> None:
        if not isinstance(state, LogisticState):
            raise ValueError(f"expected LogisticState, got {type(state).__name__}")
        if np.shape(state.coef) != (self.dim,) or not np.all(np.isfinite(state.coef)):
            raise ValueError("coefficient vector has wrong shape or non-finite entries")


def pima_model(which: int) -> LogisticRegressionModel:
    """Model 1: NP + PGC + BMI + DP; Model 2 adds AGE. Both include an intercept."""
    if which not in COVARIATES:
        raise ValueError(f"pima model must be 1 or 2, got {which!r}")
    return LogisticRegressionModel(f"pima{which}", _design(which),
                                   reference_log_evidence=BENCHMARK_LOG_EVIDENCE[which])
