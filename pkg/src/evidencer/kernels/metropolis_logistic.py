"""Random-walk Metropolis for tempered Bayesian logistic regression.

The proposal is ``N(theta, diag(min(0.01/t, 1/tau)))``: the step shrinks as the
tempered likelihood sharpens, and is capped at the prior variance (which is
what it resolves to at ``t = 0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .rung import ChainRun

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class LogisticState:
    coef: np.ndarray


@dataclass(frozen=True, eq=False)
class LogisticData:
    X: np.ndarray  # includes the leading column of ones
    y: np.ndarray  # 0/1

    @property
    def dim(self) -> int:
        return self.X.shape[1]


def proposal_variance(t: float, prior_precision: float) -> float:
    if t <= 0.0:
        return 1.0 / prior_precision
    return min(0.01 / t, 1.0 / prior_precision)


@njit(cache=True)
def _log1pexp(x):
    if x > 0.0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


@njit(cache=True)
def _loglik(X, y, theta):
    total = 0.0
    for i in range(X.shape[0]):
        eta = 0.0
        for j in range(X.shape[1]):
            eta += X[i, j] * theta[j]
        total += y[i] * eta - _log1pexp(eta)
    return total


def log_likelihood(state: LogisticState, data: LogisticData) -> float:
    """Bernoulli log-likelihood with logit link."""
    eta = data.X @ state.coef
    return float(np.sum(data.y * eta - np.logaddexp(0.0, eta)))


def log_prior(state: LogisticState, prior_precision: float) -> float:
    theta = np.asarray(state.coef, dtype=float)
    d1 = theta.size
    return 0.5 * d1 * (math.log(prior_precision) - LOG_2PI) - 0.5 * prior_precision * float(theta @ theta)


def log_acceptance_ratio(current: LogisticState, proposal: LogisticState, t: float,
                         data: LogisticData, prior_precision: float = 0.01) -> float:
    """``t [l(theta') - l(theta)] + log p(theta') - log p(theta)``."""
    dl = log_likelihood(proposal, data) - log_likelihood(current, data)
    dp = log_prior(proposal, prior_precision) - log_prior(current, prior_precision)
    return (t * dl if t != 0.0 else 0.0) + dp


def acceptance_probability(current, proposal, t, data, prior_precision=0.01) -> float:
    return float(min(1.0, math.exp(min(0.0, log_acceptance_ratio(current, proposal, t, data, prior_precision)))))


@njit(cache=True)
def _metropolis_sweeps(theta0, t, X, y, prior_precision, step_sd, normals, log_u, loglik_out):
    d = theta0.size
    theta = theta0.copy()
    prop = np.empty(d)
    ll = _loglik(X, y, theta)
    lp = 0.0
    for j in range(d):
        lp -= 0.5 * prior_precision * theta[j] * theta[j]
    accepted = 0
    nonfinite = 0
    for k in range(log_u.size):
        lp_prop = 0.0
        for j in range(d):
            prop[j] = theta[j] + step_sd * normals[k, j]
            lp_prop -= 0.5 * prior_precision * prop[j] * prop[j]
        ll_prop = _loglik(X, y, prop)
        if not np.isfinite(ll_prop):
            nonfinite += 1
        else:
            log_alpha = lp_prop - lp
            if t != 0.0:
                log_alpha += t * (ll_prop - ll)
            if log_u[k] < log_alpha:
                for j in range(d):
                    theta[j] = prop[j]
                ll = ll_prop
                lp = lp_prop
                accepted += 1
        loglik_out[k] = ll
    return theta, accepted, nonfinite


def run_metropolis_logistic(state: LogisticState, t: float, data: LogisticData, prior_precision: float,
                            iterations: int, rng: np.random.Generator) -> ChainRun:
    step_sd = math.sqrt(proposal_variance(t, prior_precision))
    normals = rng.standard_normal((iterations, data.dim))
    with np.errstate(divide="ignore"):
        log_u = np.log(rng.random(iterations))
    loglik = np.empty(iterations)
    theta, accepted, nonfinite = _metropolis_sweeps(
        np.asarray(state.coef, dtype=float), float(t), data.X, data.y, float(prior_precision),
        step_sd, normals, log_u, loglik,
    )
    return ChainRun(loglik, LogisticState(theta), accepted=int(accepted), proposed=iterations,
                    rejected_nonfinite=int(nonfinite))


def metropolis_logistic_step(state: LogisticState, t: float, data: LogisticData,
                             prior_precision: float = 0.01, *,
                             rng: np.random.Generator) -> LogisticState:
    """Single Metropolis update of all coefficients jointly."""
    return run_metropolis_logistic(state, t, data, prior_precision, 1, rng).state
