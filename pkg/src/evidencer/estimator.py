"""End-to-end evidence estimation: ladder, tempered runs, quadrature."""

from __future__ import annotations

import bisect
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .kernels.rung import RunConfig, run_rung
from .ladder import ScheduleSpec, adaptive_build, pf_schedule
from .quadrature import (DevianceCurve, EvidenceReport, RungEstimate, corrected_trapezium,
                         sn_bounds, stepping_stone, trapezium)

ESTIMATORS = ("standard", "modified", "stepping_stone")
_ALIASES = {"ss": "stepping_stone", "pp": "standard", "mpp": "modified"}


def parse_estimators(names: Iterable[str] | str) -> frozenset:
    """Normalise estimator names; ``"all"`` expands to every estimator."""
    if isinstance(names, str):
        names = [n for n in names.split(",") if n]
    out = set()
    for name in names:
        name = _ALIASES.get(name.strip(), name.strip())
        if name == "all":
            out.update(ESTIMATORS)
        elif name in ESTIMATORS:
            out.add(name)
        else:
            raise ValueError(f"unknown estimator {name!r}; choose from standard, modified, ss, all")
    if not out:
        raise ValueError("at least one estimator is required")
    return frozenset(out)


@dataclass(frozen=True)
class PipelineConfig:
    schedule: ScheduleSpec = field(default_factory=ScheduleSpec)
    run: RunConfig = field(default_factory=RunConfig)
    estimators: frozenset = frozenset({"standard", "modified"})
    keep_samples: Optional[bool] = None

    def __post_init__(self):
        object.__setattr__(self, "estimators", parse_estimators(self.estimators))
        wants_ss = "stepping_stone" in self.estimators
        if self.keep_samples is None:
            object.__setattr__(self, "keep_samples", wants_ss)
        elif wants_ss and not self.keep_samples:
            raise ValueError("the stepping stone estimator needs keep_samples=True")


class WarmStartEvaluator:
    """Runs rungs on demand, starting each chain from the closest larger ``t`` run so far.

    The very first rung is initialised from a prior draw.
    """

    def __init__(self, model, run: RunConfig, rng: np.random.Generator, keep_samples: bool = False):
        self.model = model
        self.run = run
        self.rng = rng
        self.keep_samples = keep_samples
        self._ts: list[float] = []
        self._states: list = []
        self.calls: list[float] = []

    def initial_state(self, t: float):
        j = bisect.bisect_right(self._ts, t)
        if j < len(self._ts):
            return self._states[j]
        return self.model.prior_sample(self.rng)

    def __call__(self, t: float) -> RungEstimate:
        init = self.initial_state(t)
        est, state = run_rung(self.model, t, init, self.run, self.rng, keep_samples=self.keep_samples)
        j = bisect.bisect_left(self._ts, t)
        if j < len(self._ts) and self._ts[j] == t:
            self._states[j] = state
        else:
            self._ts.insert(j, t)
            self._states.insert(j, state)
        self.calls.append(t)
        return est


def build_report(curve: DevianceCurve, estimators: Iterable[str]) -> EvidenceReport:
    estimators = parse_estimators(estimators)
    lower, upper, s_n = sn_bounds(curve)
    ss = None
    if "stepping_stone" in estimators:
        ss = stepping_stone(curve.ladder, [p.samples for p in curve.points[:-1]])
    return EvidenceReport(
        log_z_standard=trapezium(curve) if "standard" in estimators else None,
        log_z_modified=corrected_trapezium(curve) if "modified" in estimators else None,
        log_z_stepping_stone=ss,
        lower_bound=lower,
        upper_bound=upper,
        s_n=s_n,
    )


def run_pipeline(model, config: PipelineConfig,
                 rng: Optional[np.random.Generator] = None) -> tuple[EvidenceReport, DevianceCurve]:
    """Estimate the log evidence of ``model``.

    Rungs run sequentially from ``t = 1`` downwards (powered fraction) or in
    adaptive insertion order, each warm-started from the nearest larger
    temperature already visited.
    """
    if rng is None:
        rng = np.random.default_rng(config.run.rng_seed)
    evaluate = WarmStartEvaluator(model, config.run, rng, config.keep_samples)
    sched = config.schedule
    if sched.kind == "pf":
        ladder = pf_schedule(sched.rung_count, sched.pf_power)
        points = [evaluate(t) for t in reversed(list(ladder))]
        curve = DevianceCurve(tuple(points))
    else:
        _, curve = adaptive_build(sched.rung_count, evaluate)
    return build_report(curve, config.estimators), curve


# ---------------------------------------------------------------------------
# replication


@dataclass(frozen=True)
class ErrorStats:
    mean: float
    bias: float
    se: float
    rmse: float
    replicates: int


def error_stats(estimates, truth: float) -> ErrorStats:
    """Bias, replicate standard deviation (``N-1``) and RMSE = sqrt(bias^2 + SD^2)."""
    x = np.asarray(estimates, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 replicate estimates")
    mean = float(np.mean(x))
    bias = mean - truth
    se = float(np.std(x, ddof=1))
    return ErrorStats(mean, bias, se, float(np.hypot(bias, se)), int(x.size))


class ReplicateError(RuntimeError):
    def __init__(self, index: int, cause: BaseException):
        super().__init__(f"replicate {index} failed: {cause}")
        self.index = index


@dataclass(frozen=True)
class ReplicationSummary:
    truth: float
    reports: tuple
    curves: tuple = ()

    @property
    def estimators(self) -> tuple:
        first = self.reports[0]
        return tuple(e for e in ESTIMATORS if first.estimate(e) is not None)

    def estimates(self, estimator: str) -> np.ndarray:
        return np.array([r.estimate(estimator) for r in self.reports], dtype=float)

    def stats(self, estimator: str) -> ErrorStats:
        return error_stats(self.estimates(estimator), self.truth)

    def table(self) -> Mapping[str, ErrorStats]:
        return {e: self.stats(e) for e in self.estimators}


def replicate_seeds(seed, R: int) -> list[np.random.SeedSequence]:
    """Independent child seeds; replicate ``i`` gets the same stream however work is split.

    ``seed`` is anything :class:`numpy.random.SeedSequence` accepts as entropy,
    e.g. an int or a list of ints.
    """
    return np.random.SeedSequence(seed).spawn(R)


def _one_replicate(args):
    index, model, config, seed_seq, keep_curve = args
    try:
        report, curve = run_pipeline(model, config, np.random.default_rng(seed_seq))
    except Exception as exc:
        raise ReplicateError(index, exc) from exc
    if keep_curve:
        curve = DevianceCurve(tuple(p.without_payload() for p in curve.points))
        return report, curve
    return report, None


def replicate(model, config: PipelineConfig, R: int, truth: float, seed,
              workers: int = 1, keep_curves: bool = False) -> ReplicationSummary:
    """Run ``R`` independent pipelines and summarise their error against ``truth``."""
    if R < 2:
        raise ValueError(f"need at least 2 replicates, got {R}")
    jobs = [(i, model, config, s, keep_curves) for i, s in enumerate(replicate_seeds(seed, R))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_replicate, jobs))
    else:
        results = [_one_replicate(j) for j in jobs]
    reports = tuple(r for r, _ in results)
    curves = tuple(c for _, c in results) if keep_curves else ()
    return ReplicationSummary(float(truth), reports, curves)
