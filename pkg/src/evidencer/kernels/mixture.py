"""Hybrid Gibbs/Metropolis sweep for a tempered univariate normal mixture.

The tempered target is the completed likelihood ``p(y|z, mu, sigma2)^t`` times
the untempered priors ``p(z|w) p(w) p(mu) p(sigma2)``. At ``t = 1`` its
normalising constant is the ordinary mixture evidence.

Priors: ``w ~ Dirichlet(1, ..., 1)``, ``mu_j ~ N(0, mean_variance)``,
``sigma2_j ~ InvGamma(shape, rate)`` (density proportional to
``x^-(shape+1) exp(-rate/x)``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rung import ChainRun

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class MixtureState:
    """Component weights, means, variances and 0-based allocations."""

    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    allocations: np.ndarray

    @property
    def k(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class MixturePrior:
    mean_variance: float = 1.0e4
    var_shape: float = 1.0
    var_rate: float = 1.0
    concentration: float = 1.0


def component_log_density(y: np.ndarray, means, variances) -> np.ndarray:
    """``log N(y_i; mu_j, sigma2_j)`` as an ``(n, k)`` array."""
    means = np.asarray(means)
    variances = np.asarray(variances)
    return -0.5 * (LOG_2PI + np.log(variances)) - 0.5 * (y[:, None] - means) ** 2 / variances


def completed_log_likelihood(state: MixtureState, y: np.ndarray) -> float:
    z = state.allocations
    mu = state.means[z]
    s2 = state.variances[z]
    return float(np.sum(-0.5 * (LOG_2PI + np.log(s2)) - 0.5 * (y - mu) ** 2 / s2))


def allocation_log_ratio(state: MixtureState, y: np.ndarray, i: int, j_new: int, t: float) -> float:
    """Log Metropolis ratio for moving observation ``i`` to component ``j_new``."""
    j = state.allocations[i]
    if j_new == j:
        return 0.0
    ld = component_log_density(y[i:i + 1], state.means[[j, j_new]], state.variances[[j, j_new]])[0]
    return float(np.log(state.weights[j_new]) - np.log(state.weights[j]) + t * (ld[1] - ld[0]))


def _sweep(state, t, y, k, rng, prior):
    n = y.size
    z = state.allocations
    counts = np.bincount(z, minlength=k)

    weights = rng.dirichlet(prior.concentration + counts)
    weights /= weights.sum()  # exact 1 for k = 1

    sums = np.bincount(z, weights=y, minlength=k)
    prec = 1.0 / prior.mean_variance + t * counts / state.variances
    means = (t * sums / state.variances) / prec + rng.standard_normal(k) / np.sqrt(prec)

    sq = np.bincount(z, weights=(y - means[z]) ** 2, minlength=k)
    shape = prior.var_shape + 0.5 * t * counts
    rate = prior.var_rate + 0.5 * t * sq
    variances = rate / rng.standard_gamma(shape)

    # allocations are conditionally independent, so one vectorised pass is
    # equivalent to n single-site updates
    proposal = rng.integers(0, k, size=n)
    u = rng.random(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_w = np.log(weights)
        log_alpha = log_w[proposal] - log_w[z]
        if t != 0.0:
            ld_cur = -0.5 * np.log(variances[z]) - 0.5 * (y - means[z]) ** 2 / variances[z]
            ld_new = -0.5 * np.log(variances[proposal]) - 0.5 * (y - means[proposal]) ** 2 / variances[proposal]
            log_alpha = log_alpha + t * (ld_new - ld_cur)
        move = (proposal != z) & (np.log(u) < log_alpha)
    z_new = np.where(move, proposal, z)
    return MixtureState(weights, means, variances, z_new), int(np.count_nonzero(move))


def mixture_step(state: MixtureState, t: float, y: np.ndarray, k: int, rng: np.random.Generator,
                 prior: MixturePrior = MixturePrior()) -> MixtureState:
    """One sweep over weights, means, variances (Gibbs) and allocations (Metropolis)."""
    return _sweep(state, t, y, k, rng, prior)[0]


def run_mixture(state: MixtureState, t: float, y: np.ndarray, k: int, iterations: int,
                rng: np.random.Generator, prior: MixturePrior = MixturePrior()) -> ChainRun:
    loglik = np.empty(iterations)
    accepted = 0
    for it in range(iterations):
        state, acc = _sweep(state, t, y, k, rng, prior)
        accepted += acc
        loglik[it] = completed_log_likelihood(state, y)
    return ChainRun(loglik, state, accepted=accepted, proposed=iterations * y.size)
