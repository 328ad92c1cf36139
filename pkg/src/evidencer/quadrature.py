"""Quadrature rules over the expected log deviance curve.

Everything here is a pure function of its inputs. The curve-level functions
(:func:`trapezium`, :func:`corrected_trapezium`, :func:`sn_bounds`) validate a
:class:`DevianceCurve` and then delegate to array-level rules that can be used
directly on arbitrary integrands (e.g. polynomials with negative slope).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Optional, Sequence

import numpy as np
from scipy.special import logsumexp


class InvalidCurveError(ValueError):
    """Raised when a ladder or deviance curve violates its invariants."""


class NonFiniteSampleError(ValueError):
    """Raised when a log-likelihood sample is NaN or infinite."""

    def __init__(self, rung: int, message: str):
        super().__init__(message)
        self.rung = rung


def _check_ladder(t: np.ndarray) -> None:
    if t.ndim != 1 or t.size < 2:
        raise InvalidCurveError(f"a ladder needs at least 2 rungs, got {t.size}")
    if not np.all(np.isfinite(t)):
        raise InvalidCurveError("ladder contains non-finite temperatures")
    if t[0] != 0.0 or t[-1] != 1.0:
        raise InvalidCurveError(
            f"ladder must start at exactly 0 and end at exactly 1, got [{t[0]!r}, {t[-1]!r}]"
        )
    if np.any(np.diff(t) <= 0.0):
        raise InvalidCurveError("ladder temperatures must be strictly increasing")


@dataclass(frozen=True)
class Ladder:
    """Inverse temperatures ``0 = t_0 < t_1 < ... < t_n = 1``."""

    rungs: np.ndarray

    def __post_init__(self):
        t = np.array(self.rungs, dtype=float)
        _check_ladder(t)
        t.setflags(write=False)
        object.__setattr__(self, "rungs", t)

    def __len__(self) -> int:
        return self.rungs.size

    def __iter__(self) -> Iterator[float]:
        return iter(self.rungs.tolist())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.rungs, dtype=dtype)

    def __eq__(self, other) -> bool:
        return isinstance(other, Ladder) and np.array_equal(self.rungs, other.rungs)

    @property
    def n_intervals(self) -> int:
        return self.rungs.size - 1


@dataclass(frozen=True)
class RungEstimate:
    """Sampled moments of the log deviance ``log p(y|theta)`` at one temperature.

    ``state`` is the chain state after the last sweep (used to warm-start the
    next rung) and ``samples`` optionally keeps the retained log-likelihood
    draws, which the stepping stone estimator needs.
    """

    t: float
    mean_logdev: float
    var_logdev: Optional[float]
    sample_count: int
    state: Any = field(default=None, compare=False, repr=False)
    samples: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    acceptance_rate: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise InvalidCurveError(f"inverse temperature {self.t!r} outside [0, 1]")
        if self.var_logdev is not None and self.var_logdev < 0.0:
            raise InvalidCurveError(f"negative variance {self.var_logdev!r} at t={self.t!r}")
        if self.sample_count < 2:
            raise InvalidCurveError(f"need at least 2 retained samples, got {self.sample_count}")

    def without_payload(self) -> "RungEstimate":
        """Copy that drops the warm-start state and retained samples."""
        return RungEstimate(self.t, self.mean_logdev, self.var_logdev, self.sample_count,
                            acceptance_rate=self.acceptance_rate)


@dataclass(frozen=True)
class DevianceCurve:
    """Ordered collection of rung estimates whose temperatures form a ladder."""

    points: tuple

    def __post_init__(self):
        points = tuple(sorted(self.points, key=lambda p: p.t))
        object.__setattr__(self, "points", points)
        _check_ladder(np.array([p.t for p in points], dtype=float))

    @classmethod
    def from_arrays(cls, t, mean, var=None, sample_count: int = 2) -> "DevianceCurve":
        t = np.asarray(t, dtype=float)
        mean = np.asarray(mean, dtype=float)
        if var is None:
            var = [None] * t.size
        if len(mean) != t.size or len(var) != t.size:
            raise InvalidCurveError("t, mean and var must have equal length")
        return cls(tuple(
            RungEstimate(float(ti), float(mi), None if vi is None else float(vi), sample_count)
            for ti, mi, vi in zip(t, mean, var)
        ))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def ladder(self) -> Ladder:
        return Ladder(self.t)

    @property
    def t(self) -> np.ndarray:
        return np.array([p.t for p in self.points], dtype=float)

    @property
    def means(self) -> np.ndarray:
        return np.array([p.mean_logdev for p in self.points], dtype=float)

    @property
    def variances(self) -> np.ndarray:
        missing = [p.t for p in self.points if p.var_logdev is None]
        if missing:
            raise InvalidCurveError(f"variance missing at t={missing[0]!r}")
        return np.array([p.var_logdev for p in self.points], dtype=float)

    @property
    def sample_counts(self) -> np.ndarray:
        return np.array([p.sample_count for p in self.points], dtype=int)


@dataclass(frozen=True)
class EvidenceReport:
    """Log-evidence estimates (nats) from one pipeline run.

    Estimators that were not requested are ``None``. The bounds are the
    lower/upper step-function approximations of the integral and are always
    present; ``s_n`` is their difference.
    """

    log_z_standard: Optional[float]
    log_z_modified: Optional[float]
    log_z_stepping_stone: Optional[float]
    lower_bound: float
    upper_bound: float
    s_n: float

    def estimate(self, name: str) -> Optional[float]:
        return {
            "standard": self.log_z_standard,
            "modified": self.log_z_modified,
            "stepping_stone": self.log_z_stepping_stone,
        }[name]


# ---------------------------------------------------------------------------
# array-level rules


def _as_grid(t, f) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(t, dtype=float)
    f = np.asarray(f, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise InvalidCurveError(f"need at least 2 points, got {t.size}")
    if f.shape != t.shape:
        raise InvalidCurveError("abscissae and ordinates differ in shape")
    return t, f


def trapezium_rule(t, f) -> float:
    """Composite trapezium rule on a (possibly uneven) grid."""
    t, f = _as_grid(t, f)
    h = np.diff(t)
    return float(np.sum(h * (f[:-1] + f[1:]) / 2.0))


def corrected_trapezium_rule(t, f, df) -> float:
    """Trapezium rule with the endpoint-derivative correction on each panel.

    Each panel ``[a, b]`` contributes ``(b-a)(f(a)+f(b))/2 - (b-a)^2 (f'(b)-f'(a))/12``,
    which is exact for cubics.
    """
    t, f = _as_grid(t, f)
    df = np.asarray(df, dtype=float)
    if df.shape != t.shape:
        raise InvalidCurveError("derivative array differs in shape from the grid")
    h = np.diff(t)
    return float(np.sum(h * (f[:-1] + f[1:]) / 2.0) - np.sum(h ** 2 / 12.0 * np.diff(df)))


def rectangle_bounds(t, f) -> tuple[float, float]:
    """Left- and right-endpoint rectangle sums."""
    t, f = _as_grid(t, f)
    h = np.diff(t)
    return float(np.sum(h * f[:-1])), float(np.sum(h * f[1:]))


# ---------------------------------------------------------------------------
# curve-level API


def _require_curve(curve: DevianceCurve) -> DevianceCurve:
    if not isinstance(curve, DevianceCurve):
        raise InvalidCurveError(f"expected a DevianceCurve, got {type(curve).__name__}")
    if len(curve) < 2:
        raise InvalidCurveError("a deviance curve needs at least 2 points")
    return curve


def trapezium(curve: DevianceCurve) -> float:
    """Standard power posterior estimate of the log evidence."""
    curve = _require_curve(curve)
    return trapezium_rule(curve.t, curve.means)


def corrected_trapezium(curve: DevianceCurve) -> float:
    """Modified power posterior estimate.

    The derivative of the expected log deviance equals the variance of the
    log deviance, so the per-rung sampled variances stand in for ``f'``.
    """
    curve = _require_curve(curve)
    return corrected_trapezium_rule(curve.t, curve.means, curve.variances)


def sn_bounds(curve: DevianceCurve) -> tuple[float, float, float]:
    """Lower and upper rectangle approximations and their gap ``S_n``.

    No monotonicity check is made; a negative gap signals Monte Carlo noise.
    """
    curve = _require_curve(curve)
    lower, upper = rectangle_bounds(curve.t, curve.means)
    return lower, upper, upper - lower


def stepping_stone(ladder, loglik_samples: Sequence[np.ndarray]) -> float:
    """Stepping stone estimate of the log evidence, computed in log space.

    Parameters
    ----------
    ladder : Ladder or array-like
        Inverse temperatures ``t_0 .. t_n``.
    loglik_samples : sequence of arrays
        ``loglik_samples[k]`` holds ``log p(y|theta)`` for draws from the
        power posterior at ``t_k``, for ``k = 0 .. n-1``. An extra trailing
        entry for ``t_n = 1`` is ignored.

    Returns
    -------
    float
        ``sum_k [logsumexp((t_{k+1} - t_k) * l_k) - log m_k]``.
    """
    t = ladder.rungs if isinstance(ladder, Ladder) else Ladder(ladder).rungs
    n = t.size - 1
    if len(loglik_samples) < n:
        raise InvalidCurveError(
            f"stepping stone needs samples for {n} rungs, got {len(loglik_samples)}"
        )
    total = 0.0
    for k in range(n):
        s = loglik_samples[k]
        if s is None:
            raise InvalidCurveError(f"no log-likelihood samples for rung {k} (t={t[k]!r})")
        s = np.asarray(s, dtype=float).ravel()
        if s.size == 0:
            raise InvalidCurveError(f"empty sample array for rung {k} (t={t[k]!r})")
        if not np.all(np.isfinite(s)):
            raise NonFiniteSampleError(k, f"non-finite log-likelihood sample at rung {k} (t={t[k]!r})")
        # sorting makes the sum bit-identical under any within-rung ordering
        total += float(logsumexp((t[k + 1] - t[k]) * np.sort(s)) - np.log(s.size))
    return total
