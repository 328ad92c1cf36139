"""Machine-readable experiment outputs.

Every table is written either as UTF-8 CSV with a header row or as one JSON
document. Floats are written with 17 significant digits so that reading a file
back reproduces the original doubles exactly; missing values are an empty CSV
field or JSON ``null``. Nothing time- or host-dependent is written, so equal
inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..quadrature import DevianceCurve, RungEstimate

CURVE_COLUMNS = ("t", "mean_logdev", "var_logdev", "sample_count", "acceptance_rate")
CURVE_KEY_COLUMNS = ("model", "schedule", "n", "replicate")
REPORT_COLUMNS = ("model", "schedule", "n", "replicate", "log_z_standard", "log_z_modified",
                  "log_z_stepping_stone", "lower_bound", "upper_bound", "s_n")
SUMMARY_COLUMNS = ("model", "schedule", "estimator", "n", "replicates", "iterations", "truth",
                   "mean", "bias", "se", "rmse")

_INT_COLUMNS = {"sample_count", "n", "replicate", "replicates", "iterations"}
_STR_COLUMNS = {"model", "schedule", "estimator"}

BUNDLE_FILES = {"csv": ("summary.csv", "reports.csv", "curves.csv"), "json": ("bundle.json",)}


def format_float(x: Optional[float]) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def _encode(column: str, value) -> str:
    if value is None:
        return ""
    if column in _STR_COLUMNS:
        return str(value)
    if column in _INT_COLUMNS:
        return str(int(value))
    return format_float(value)


def _decode(column: str, text: str):
    if text == "":
        return None
    if column in _STR_COLUMNS:
        return text
    if column in _INT_COLUMNS:
        return int(text)
    return float(text)


def _json_value(column: str, value):
    if value is None or column in _STR_COLUMNS:
        return value
    if column in _INT_COLUMNS:
        return int(value)
    x = float(value)
    if not math.isfinite(x):
        raise ValueError(f"cannot encode non-finite {column}={x!r} as JSON")
    return x


def write_csv(path: str, columns: Sequence[str], rows: Sequence[dict]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_encode(c, row.get(c)) for c in columns])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def read_csv(path: str) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        return [{c: _decode(c, v) for c, v in row.items()} for row in reader]


def _dumps(doc) -> str:
    # repr of a Python float is the shortest string that round-trips exactly
    return json.dumps(doc, indent=1, sort_keys=False, allow_nan=False) + "\n"


def _json_rows(columns: Sequence[str], rows: Sequence[dict]) -> list[dict]:
    return [{c: _json_value(c, row.get(c)) for c in columns} for row in rows]


# ---------------------------------------------------------------------------
# single curves


def curve_rows(curve: DevianceCurve) -> list[dict]:
    return [{"t": p.t, "mean_logdev": p.mean_logdev, "var_logdev": p.var_logdev,
             "sample_count": p.sample_count, "acceptance_rate": p.acceptance_rate}
            for p in curve.points]


def curve_from_rows(rows: Sequence[dict]) -> DevianceCurve:
    return DevianceCurve(tuple(
        RungEstimate(r["t"], r["mean_logdev"], r["var_logdev"], r["sample_count"],
                     acceptance_rate=r.get("acceptance_rate"))
        for r in rows
    ))


def emit_curve(curve: DevianceCurve, path: str, format: str = "csv") -> None:
    """Write one expected log deviance curve, one row per rung in increasing ``t``."""
    rows = curve_rows(curve)
    if format == "csv":
        write_csv(path, CURVE_COLUMNS, rows)
    elif format == "json":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_dumps({"columns": list(CURVE_COLUMNS), "rows": _json_rows(CURVE_COLUMNS, rows)}))
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def read_curve(path: str, format: Optional[str] = None) -> DevianceCurve:
    """Inverse of :func:`emit_curve`; the format defaults to the file extension."""
    format = format or os.path.splitext(path)[1].lstrip(".").lower()
    if format == "csv":
        return curve_from_rows(read_csv(path))
    if format == "json":
        with open(path, encoding="utf-8") as fh:
            return curve_from_rows(json.load(fh)["rows"])
    raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


# ---------------------------------------------------------------------------
# bundles


@dataclass
class OutputBundle:
    """Summary, per-replicate report and curve tables of one experiment."""

    summary: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    curves: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def check(self) -> None:
        keys = [(r["model"], r["schedule"], r["estimator"], r["n"]) for r in self.summary]
        if len(set(keys)) != len(keys):
            raise ValueError("summary rows must be unique per (model, schedule, estimator, n)")
        for r in self.summary:
            rhs = r["bias"] ** 2 + r["se"] ** 2
            if abs(r["rmse"] ** 2 - rhs) > 1e-10 * max(1.0, rhs):
                raise ValueError(f"RMSE identity violated in summary row {r}")

    def tables(self) -> dict:
        return {"summary": self.summary, "reports": self.reports, "curves": self.curves}


_TABLE_COLUMNS = {
    "summary": SUMMARY_COLUMNS,
    "reports": REPORT_COLUMNS,
    "curves": CURVE_KEY_COLUMNS + CURVE_COLUMNS,
}


def write_bundle(bundle: OutputBundle, directory: str, format: str = "csv") -> list[str]:
    """Write ``bundle`` into ``directory``; returns the paths written."""
    bundle.check()
    os.makedirs(directory, exist_ok=True)
    if format == "csv":
        paths = []
        for name in ("summary", "reports", "curves"):
            path = os.path.join(directory, f"{name}.csv")
            write_csv(path, _TABLE_COLUMNS[name], getattr(bundle, name))
            paths.append(path)
        return paths
    if format == "json":
        doc = {"config": bundle.config}
        for name in ("summary", "reports", "curves"):
            doc[name] = _json_rows(_TABLE_COLUMNS[name], getattr(bundle, name))
        path = os.path.join(directory, "bundle.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_dumps(doc))
        return [path]
    raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def read_bundle(directory: str, format: str = "csv") -> OutputBundle:
    if format == "csv":
        tables = {name: read_csv(os.path.join(directory, f"{name}.csv"))
                  for name in ("summary", "reports", "curves")}
        return OutputBundle(**tables)
    if format == "json":
        with open(os.path.join(directory, "bundle.json"), encoding="utf-8") as fh:
            doc = json.load(fh)
        return OutputBundle(doc["summary"], doc["reports"], doc["curves"], doc.get("config", {}))
    raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def curves_in(bundle: OutputBundle) -> dict:
    """Group the bundle's curve rows into ``{(model, schedule, n, replicate): DevianceCurve}``."""
    groups: dict = {}
    for row in bundle.curves:
        groups.setdefault(tuple(row[c] for c in CURVE_KEY_COLUMNS), []).append(row)
    return {k: curve_from_rows(v) for k, v in groups.items()}

