"""Radiata pine: two non-nested normal linear regressions.

Model 1 regresses maximum compression strength on density, Model 2 on
resin-adjusted density; both covariates are mean-centred. The normal-gamma
prior is conjugate, so ``log z(y|t)`` is available in closed form for every
inverse temperature.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from ..kernels.gibbs_linreg import (LinRegData, LinRegState, NormalGammaPrior, gibbs_linreg_step,
                                    log_likelihood, run_gibbs_linreg)
from .base import ModelSpec, load_dataset

PRIOR_MEAN = (3000.0, 185.0)
R0, S0 = 0.06, 6.0
A0 = 3.0
B0 = 2.0 * 300.0 ** 2

COVARIATE = {1: "density", 2: "adjusted_density"}


def default_prior() -> NormalGammaPrior:
    return NormalGammaPrior(np.array(PRIOR_MEAN), np.diag([R0, S0]), A0, B0)


@lru_cache(maxsize=None)
def _design(which: int) -> LinRegData:
    cols = load_dataset("radiata.csv")
    x = cols[COVARIATE[which]]
    X = np.column_stack([np.ones_like(x), x - x.mean()])
    return LinRegData(X, cols["strength"].copy())


def log_z(t: float, data: LinRegData, prior: NormalGammaPrior) -> float:
    """Normalising constant of ``p(y|theta)^t p(theta)`` for the normal-gamma model.

    Defined for any ``t >= 0``, which lets finite differences straddle ``t = 1``.
    """
    if not t >= 0.0:
        raise ValueError(f"inverse temperature {t!r} is negative")
    n = data.n
    Q0, mu0 = prior.precision, prior.mean
    M = t * data.XtX + Q0
    m = np.linalg.solve(M, t * data.Xty + Q0 @ mu0)
    a_t = prior.shape + 0.5 * n * t
    b_t = prior.rate + 0.5 * (t * data.yty + mu0 @ Q0 @ mu0 - m @ M @ m)
    return float(
        -0.5 * n * t * math.log(2.0 * math.pi)
        + 0.5 * (np.linalg.slogdet(Q0)[1] - np.linalg.slogdet(M)[1])
        + prior.shape * math.log(prior.rate) - gammaln(prior.shape)
        + gammaln(a_t) - a_t * math.log(b_t)
    )


class LinearRegressionModel(ModelSpec):
    """Normal linear regression with a normal-gamma prior and a Gibbs kernel."""

    def __init__(self, name: str, data: LinRegData, prior: NormalGammaPrior):
        self.name = name
        self.data = data
        self.prior = prior
        self.reference_log_evidence = log_z(1.0, data, prior)

    def log_likelihood(self, state: LinRegState) -> float:
        return log_likelihood(state, self.data)

    def log_prior(self, state: LinRegState) -> float:
        p = self.prior
        tau = state.precision
        d = state.coef - p.mean
        k = d.size
        log_norm = 0.5 * (k * (math.log(tau) - math.log(2 * math.pi)) + np.linalg.slogdet(p.precision)[1])
        log_gamma = p.shape * math.log(p.rate) - gammaln(p.shape) + (p.shape - 1) * math.log(tau) - p.rate * tau
        return float(log_norm - 0.5 * tau * d @ p.precision @ d + log_gamma)

    def prior_sample(self, rng: np.random.Generator) -> LinRegState:
        p = self.prior
        tau = rng.gamma(p.shape, 1.0 / p.rate)
        L = np.linalg.cholesky(p.precision)
        coef = p.mean + np.linalg.solve(L.T, rng.standard_normal(p.mean.size)) / math.sqrt(tau)
        return LinRegState(coef, float(tau))

    def step(self, state, t, rng):
        return gibbs_linreg_step(state, t, self.data, self.prior, rng)

    def run_chain(self, state, t, iterations, rng):
        return run_gibbs_linreg(state, t, self.data, self.prior, iterations, rng)

    def validate_state(self, state) -> None:
        if not isinstance(state, LinRegState):
            raise ValueError(f"expected LinRegState, got {type(state).__name__}")
        if np.shape(state.coef) != self.prior.mean.shape or not np.all(np.isfinite(state.coef)):
            raise ValueError("coefficient vector has wrong shape or non-finite entries")
        if not state.precision > 0 or not math.isfinite(state.precision):
            raise ValueError(f"precision must be positive, got {state.precision!r}")

    @property
    def has_analytic_evidence(self) -> bool:
        return True

    def log_evidence(self, t: float = 1.0) -> float:
        return log_z(t, self.data, self.prior)


def radiata_model(which: int) -> LinearRegressionModel:
    """Model 1 (density) or Model 2 (resin-adjusted density)."""
    if which not in COVARIATE:
        raise ValueError(f"radiata model must be 1 or 2, got {which!r}")
    return LinearRegressionModel(f"radiata{which}", _design(which), default_prior())


def radiata_log_z(which: int, t: float) -> float:
    """Analytic ``log z(y|t)`` for radiata Model 1 or 2."""
    if which not in COVARIATE:
        raise ValueError(f"radiata model must be 1 or 2, got {which!r}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"inverse temperature {t!r} outside [0, 1]")
    return log_z(t, _design(which), default_prior())
