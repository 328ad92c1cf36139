"""Gibbs sampler for a tempered conjugate normal-gamma linear regression.

Target: ``p(y|beta,tau)^t p(beta|tau) p(tau)`` with ``beta|tau ~ N(mu0, (tau Q0)^-1)``
and ``tau ~ Gamma(a0, rate=b0)``. Raising the Gaussian likelihood to the power
``t`` keeps both full conditionals in closed form:

    beta | tau ~ N(m_t, (tau M_t)^-1),  M_t = t X'X + Q0,  m_t = M_t^-1 (t X'y + Q0 mu0)
    tau | beta ~ Gamma(a0 + n t/2 + p/2,
                       b0 + (beta-mu0)' Q0 (beta-mu0)/2 + t ||y - X beta||^2 / 2)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numba import njit

from .rung import ChainRun

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class LinRegState:
    coef: np.ndarray
    precision: float


@dataclass(frozen=True)
class NormalGammaPrior:
    mean: np.ndarray
    precision: np.ndarray  # Q0; coefficient precision is precision * tau
    shape: float
    rate: float


@dataclass(frozen=True, eq=False)
class LinRegData:
    X: np.ndarray
    y: np.ndarray

    @property
    def n(self) -> int:
        return self.y.size

    @cached_property
    def XtX(self) -> np.ndarray:
        return self.X.T @ self.X

    @cached_property
    def Xty(self) -> np.ndarray:
        return self.X.T @ self.y

    @cached_property
    def yty(self) -> float:
        return float(self.y @ self.y)


@dataclass(frozen=True)
class TemperedConditionals:
    """Per-temperature constants of the Gibbs sweep."""

    cond_mean: np.ndarray  # m_t
    cond_root: np.ndarray  # R with R R' = M_t^-1
    precision_matrix: np.ndarray  # M_t
    tau_shape: float


def tempered_conditionals(t: float, data: LinRegData, prior: NormalGammaPrior) -> TemperedConditionals:
    M = t * data.XtX + prior.precision
    try:
        L = np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"conditional precision is singular at t={t!r}") from exc
    m = np.linalg.solve(M, t * data.Xty + prior.precision @ prior.mean)
    # L' R = I gives R R' = (L L')^-1
    root = np.linalg.solve(L.T, np.eye(M.shape[0]))
    p = M.shape[0]
    return TemperedConditionals(m, np.ascontiguousarray(root), M, prior.shape + 0.5 * data.n * t + 0.5 * p)


def log_likelihood(state: LinRegState, data: LinRegData) -> float:
    resid = data.y - data.X @ state.coef
    tau = state.precision
    return 0.5 * data.n * (np.log(tau) - LOG_2PI) - 0.5 * tau * float(resid @ resid)


@njit(cache=True)
def _gibbs_sweeps(coef, tau, t, n, XtX, Xty, yty, mu0, Q0, rate0,
                  cond_mean, cond_root, normals, gammas, loglik):
    p = coef.size
    beta = coef.copy()
    half_log_2pi = 0.5 * np.log(2.0 * np.pi)
    for k in range(gammas.size):
        scale = 1.0 / np.sqrt(tau)
        for a in range(p):
            acc = 0.0
            for b in range(p):
                acc += cond_root[a, b] * normals[k, b]
            beta[a] = cond_mean[a] + scale * acc
        rss = yty
        quad = 0.0
        for a in range(p):
            rss -= 2.0 * beta[a] * Xty[a]
            for b in range(p):
                rss += beta[a] * XtX[a, b] * beta[b]
                quad += (beta[a] - mu0[a]) * Q0[a, b] * (beta[b] - mu0[b])
        if rss < 0.0:
            rss = 0.0
        tau = gammas[k] / (rate0 + 0.5 * quad + 0.5 * t * rss)
        loglik[k] = n * (0.5 * np.log(tau) - half_log_2pi) - 0.5 * tau * rss
    return beta, tau


def _run(state, t, data, prior, cond, normals, gammas):
    loglik = np.empty(gammas.size)
    beta, tau = _gibbs_sweeps(
        np.asarray(state.coef, dtype=float), float(state.precision), float(t), float(data.n),
        data.XtX, data.Xty, data.yty, prior.mean, prior.precision, float(prior.rate),
        cond.cond_mean, cond.cond_root, normals, gammas, loglik,
    )
    return loglik, LinRegState(beta, float(tau))


def gibbs_linreg_step(state: LinRegState, t: float, data: LinRegData, prior: NormalGammaPrior,
                      rng: np.random.Generator) -> LinRegState:
    """One sweep: coefficients given precision, then precision given coefficients."""
    cond = tempered_conditionals(t, data, prior)
    normals = rng.standard_normal((1, cond.cond_mean.size))
    gammas = rng.standard_gamma(cond.tau_shape, size=1)
    return _run(state, t, data, prior, cond, normals, gammas)[1]


def run_gibbs_linreg(state: LinRegState, t: float, data: LinRegData, prior: NormalGammaPrior,
                     iterations: int, rng: np.random.Generator) -> ChainRun:
    cond = tempered_conditionals(t, data, prior)
    normals = rng.standard_normal((iterations, cond.cond_mean.size))
    gammas = rng.standard_gamma(cond.tau_shape, size=iterations)
    loglik, final = _run(state, t, data, prior, cond, normals, gammas)
    return ChainRun(loglik, final)
