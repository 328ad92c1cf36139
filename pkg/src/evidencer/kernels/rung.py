"""Run one tempered chain and reduce it to a :class:`RungEstimate`."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ..quadrature import RungEstimate


@dataclass(frozen=True)
class ChainRun:
    """Raw output of ``iterations`` kernel sweeps.

    ``loglik[k]`` is ``log p(y|theta)`` at the state after sweep ``k``.
    """

    loglik: np.ndarray
    state: Any
    accepted: int = 0
    proposed: int = 0
    rejected_nonfinite: int = 0

    @property
    def acceptance_rate(self) -> Optional[float]:
        return self.accepted / self.proposed if self.proposed else None


@dataclass(frozen=True)
class RunConfig:
    iterations: int = 10000
    burn_fraction: float = 0.2
    rng_seed: Optional[int] = None

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 2:
            raise ValueError(f"iterations must be an integer >= 2, got {self.iterations!r}")
        if not 0.0 <= self.burn_fraction <= 1.0:
            raise ValueError(f"burn_fraction must lie in [0, 1], got {self.burn_fraction!r}")

    @property
    def burn_in(self) -> int:
        """``round(iterations * burn_fraction)``, capped so that 2 sweeps are always retained."""
        return min(int(round(self.iterations * self.burn_fraction)), self.iterations - 2)

    @property
    def retained(self) -> int:
        return self.iterations - self.burn_in


class RungError(RuntimeError):
    def __init__(self, t: float, cause: BaseException):
        super().__init__(f"rung at t={t!r} failed: {cause}")
        self.t = t


def run_rung(model, t: float, init, config: RunConfig, rng: Optional[np.random.Generator] = None,
             keep_samples: bool = False) -> tuple[RungEstimate, Any]:
    """Run ``config.iterations`` sweeps at inverse temperature ``t``.

    The first ``config.burn_in`` sweeps are discarded. Returns the rung
    estimate (sample mean and ``N-1`` variance of the retained log-likelihood
    values) and the final chain state for warm-starting.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"inverse temperature {t!r} outside [0, 1]")
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    model.validate_state(init)
    try:
        run = model.run_chain(init, t, config.iterations, rng)
    except Exception as exc:
        raise RungError(t, exc) from exc
    kept = np.asarray(run.loglik[config.burn_in:], dtype=float)
    estimate = RungEstimate(
        t=float(t),
        mean_logdev=float(np.mean(kept)),
        var_logdev=float(np.var(kept, ddof=1)),
        sample_count=int(kept.size),
        state=run.state,
        samples=kept.copy() if keep_samples else None,
        acceptance_rate=run.acceptance_rate,
    )
    return estimate, run.state


def batch_means_se(x, n_batches: int = 20) -> float:
    """Monte Carlo standard error of the mean of a correlated series."""
    x = np.asarray(x, dtype=float)
    size = x.size // n_batches
    if size < 1:
        raise ValueError("series too short for the requested number of batches")
    means = x[: size * n_batches].reshape(n_batches, size).mean(axis=1)
    return float(np.std(means, ddof=1) / np.sqrt(n_batches))
