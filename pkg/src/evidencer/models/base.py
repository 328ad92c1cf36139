"""Model contract shared by the built-in benchmark models."""

from __future__ import annotations

import csv
import hashlib
from importlib import resources
from typing import Any, Optional

import numpy as np

from ..kernels.rung import ChainRun


class DatasetError(ValueError):
    """A bundled dataset is missing, malformed or fails its checksum."""


# sha256 of the bundled CSV files, verified on every load
CHECKSUMS = {
    "radiata.csv": "8c9e56ed47c082eceb1f03d24e179eaab9c6298ea90d5e6b4da2b8df83de012c",
    "pima.csv": "ef6cf3b8a87b0d9b909f1e4659db235723e1976869f7c12ca70a42b5ae2d9492",
    "galaxy.csv": "f07e4c914a5500235c57ee398898ffd8220ea440b00f965d6d39bd1f8c62925c",
}

ROW_COUNTS = {"radiata.csv": 42, "pima.csv": 532, "galaxy.csv": 82}


def read_table(raw: bytes, name: str, expected_rows: Optional[int] = None,
               sha256: Optional[str] = None) -> dict[str, np.ndarray]:
    """Parse a UTF-8 CSV with a header row into float columns."""
    if sha256 is not None:
        digest = hashlib.sha256(raw).hexdigest()
        if digest != sha256:
            raise DatasetError(f"{name}: checksum mismatch (got {digest})")
    try:
        rows = list(csv.reader(raw.decode("utf-8").splitlines()))
    except UnicodeDecodeError as exc:
        raise DatasetError(f"{name}: not valid UTF-8") from exc
    if not rows:
        raise DatasetError(f"{name}: empty file")
    header, body = rows[0], [r for r in rows[1:] if r]
    if expected_rows is not None and len(body) != expected_rows:
        raise DatasetError(f"{name}: expected {expected_rows} rows, found {len(body)}")
    try:
        values = np.array([[float(v) for v in r] for r in body], dtype=float)
    except ValueError as exc:
        raise DatasetError(f"{name}: non-numeric entry ({exc})") from exc
    if values.ndim != 2 or values.shape[1] != len(header):
        raise DatasetError(f"{name}: ragged rows")
    return {col: values[:, j] for j, col in enumerate(header)}


def load_dataset(name: str) -> dict[str, np.ndarray]:
    """Load one of the bundled datasets by file name, verifying its checksum."""
    if name not in CHECKSUMS:
        raise DatasetError(f"unknown dataset {name!r}")
    try:
        raw = resources.files("evidencer.models").joinpath("data", name).read_bytes()
    except FileNotFoundError as exc:
        raise DatasetError(f"dataset file {name} is missing") from exc
    return read_table(raw, name, ROW_COUNTS[name], CHECKSUMS[name])


class ModelSpec:
    """A model whose evidence can be estimated by tempering.

    Subclasses provide the log-likelihood, a normalised log-prior, a prior
    sampler and a tempered transition kernel. ``run_chain`` runs the kernel
    for many sweeps; the default loops over ``step`` but subclasses may
    override it with a faster path that consumes the same random stream.
    """

    name: str = "model"
    #: Benchmark value of the log evidence at t=1 (analytic or long-run), if known.
    reference_log_evidence: Optional[float] = None

    def log_likelihood(self, state) -> float:
        raise NotImplementedError

    def log_prior(self, state) -> float:
        raise NotImplementedError

    def prior_sample(self, rng: np.random.Generator) -> Any:
        raise NotImplementedError

    def step(self, state, t: float, rng: np.random.Generator) -> Any:
        raise NotImplementedError

    def validate_state(self, state) -> None:
        """Raise ``ValueError`` if ``state`` is not a valid chain state."""

    def run_chain(self, state, t: float, iterations: int, rng: np.random.Generator) -> ChainRun:
        loglik = np.empty(iterations)
        for k in range(iterations):
            state = self.step(state, t, rng)
            loglik[k] = self.log_likelihood(state)
        return ChainRun(loglik, state)

    @property
    def has_analytic_evidence(self) -> bool:
        return False

    def log_evidence(self, t: float = 1.0) -> float:
        """Closed-form ``log z(y|t)``; only for models with conjugate structure."""
        raise NotImplementedError(f"{self.name} has no closed-form evidence")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"
