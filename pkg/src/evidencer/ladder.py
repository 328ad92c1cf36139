"""Inverse temperature schedules.

Two schedules are provided: the deterministic powered fraction ladder
``t_i = (i/n)^c`` and an adaptive ladder that places each new rung where the
gap between the lower and upper rectangle approximations is largest.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .quadrature import DevianceCurve, Ladder, RungEstimate

#: Candidates closer than this to an existing rung are replaced by the midpoint.
BOUNDARY_EPS = 1e-12

CurveEvaluator = Callable[[float], RungEstimate]


class ParallelTangentsError(ArithmeticError):
    """The two tangent lines never meet."""


class LadderBuildError(RuntimeError):
    """The curve evaluator failed while building an adaptive ladder."""

    def __init__(self, t: float, cause: BaseException):
        super().__init__(f"curve evaluation failed at t={t!r}: {cause}")
        self.t = t


@dataclass(frozen=True)
class ScheduleSpec:
    kind: Literal["pf", "adaptive"] = "pf"
    rung_count: int = 10
    pf_power: float = 5.0

    def __post_init__(self):
        if self.kind not in ("pf", "adaptive"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if int(self.rung_count) != self.rung_count or self.rung_count < 1:
            raise ValueError(f"rung_count must be a positive integer, got {self.rung_count!r}")
        if not self.pf_power > 0:
            raise ValueError(f"pf_power must be positive, got {self.pf_power!r}")


def pf_schedule(n: int, c: float = 5.0) -> Ladder:
    """Powered fraction ladder ``{(i/n)^c : i = 0..n}``."""
    if int(n) != n or n < 1:
        raise ValueError(f"interval count must be a positive integer, got {n!r}")
    if not c > 0:
        raise ValueError(f"exponent must be positive, got {c!r}")
    t = (np.arange(n + 1) / n) ** c
    t[0], t[-1] = 0.0, 1.0
    return Ladder(t)


def intersect_tangents(t_k, f_k, v_k, t_next, f_next, v_next) -> float:
    """Abscissa where the tangent lines at ``t_k`` and ``t_next`` cross.

    The result is not range-checked; the caller decides what to do with an
    intersection outside ``(t_k, t_next)``.
    """
    if v_k == v_next:
        raise ParallelTangentsError(f"equal slopes {v_k!r} at t={t_k!r} and t={t_next!r}")
    return (f_next - f_k + t_k * v_k - t_next * v_next) / (v_k - v_next)


def weighted_average_point(t_k, v_k, t_next, v_next) -> float:
    """Point inside ``[t_k, t_next]`` weighted towards the smaller slope.

    Falls back to the midpoint when both slopes are zero or sum to zero.
    """
    total = v_k + v_next
    if total == 0:
        return 0.5 * (t_k + t_next)
    return t_k + v_next / total * (t_next - t_k)


def _interval_contributions(t: np.ndarray, f: np.ndarray) -> np.ndarray:
    return np.diff(t) * np.diff(f)


def propose_point(t_lo, f_lo, v_lo, t_hi, f_hi, v_hi, contribution) -> float:
    """New rung inside ``(t_lo, t_hi)`` for an interval selected for refinement."""
    mid = 0.5 * (t_lo + t_hi)
    if contribution < 0:
        # non-increasing estimate: Monte Carlo noise dominates
        return mid
    try:
        cand = intersect_tangents(t_lo, f_lo, v_lo, t_hi, f_hi, v_hi)
    except ParallelTangentsError:
        cand = None
    if cand is None or not np.isfinite(cand) or not t_lo < cand < t_hi:
        cand = weighted_average_point(t_lo, v_lo, t_hi, v_hi)
    if not np.isfinite(cand) or cand - t_lo < BOUNDARY_EPS or t_hi - cand < BOUNDARY_EPS:
        cand = mid
    return float(cand)


def adaptive_build(n: int, evaluate: CurveEvaluator) -> tuple[Ladder, DevianceCurve]:
    """Grow a ladder one rung at a time from ``{0, 1}`` to ``n + 1`` rungs.

    ``evaluate(t)`` runs the sampler at ``t`` and returns a :class:`RungEstimate`.
    It is called exactly ``n + 1`` times: at ``t = 1``, then ``t = 0``, then at
    each inserted rung. At every step the interval with the largest absolute
    contribution ``(t_{i+1} - t_i)(f_{i+1} - f_i)`` to ``S_n`` is split (ties go
    to the leftmost interval).
    """
    if int(n) != n or n < 1:
        raise ValueError(f"interval count must be a positive integer, got {n!r}")

    def call(t: float) -> RungEstimate:
        try:
            est = evaluate(t)
        except Exception as exc:
            raise LadderBuildError(t, exc) from exc
        if est.var_logdev is None:
            raise LadderBuildError(t, ValueError("evaluator returned no variance"))
        return est

    top = call(1.0)
    bottom = call(0.0)
    points = [bottom, top]
    ts = [0.0, 1.0]

    while len(points) < n + 1:
        t = np.array(ts)
        f = np.array([p.mean_logdev for p in points])
        s = _interval_contributions(t, f)
        i = int(np.argmax(np.abs(s)))
        lo, hi = points[i], points[i + 1]
        t_new = propose_point(lo.t, lo.mean_logdev, lo.var_logdev,
                              hi.t, hi.mean_logdev, hi.var_logdev, s[i])
        est = call(t_new)
        j = bisect.bisect(ts, t_new)
        ts.insert(j, t_new)
        points.insert(j, est)

    curve = DevianceCurve(tuple(points))
    return curve.ladder, curve
