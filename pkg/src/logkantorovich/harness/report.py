"""Report records, the JSON/CSV/SVG writers and JSON loading."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..analysis.rates import rate_fit

__all__ = [
    "Record",
    "ExperimentReport",
    "dumps",
    "loads",
    "emit",
    "write_csv",
    "write_json",
    "write_svg",
    "CSV_COLUMNS",
    "slope_annotation",
]

CSV_COLUMNS = ("check", "family", "n", "mu", "function", "metric", "value", "bound", "verdict")
VERDICTS = ("pass", "fail", "info")


@dataclass
class Record:
    check: str
    metric: str
    value: float
    verdict: str
    bound: Optional[float] = None
    tolerance: Optional[float] = None
    family: Optional[str] = None
    n: Optional[int] = None
    mu: Optional[float] = None
    function: Optional[str] = None
    params: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}")

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "family": self.family,
            "n": self.n,
            "mu": self.mu,
            "function": self.function,
            "metric": self.metric,
            "value": self.value,
            "bound": self.bound,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "params": self.params,
            "wall_time": self.wall_time,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Record":
        return cls(**d)


@dataclass
class ExperimentReport:
    metadata: dict
    config: dict
    records: List[Record]

    @property
    def failures(self) -> List[Record]:
        return [r for r in self.records if r.verdict == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        out = {v: 0 for v in VERDICTS}
        for r in self.records:
            out[r.verdict] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "config": self.config,
            "summary": self.summary(),
            "records": [r.to_dict() for r in self.records],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        return cls(d["metadata"], d["config"], [Record.from_dict(r) for r in d["records"]])

    def canonical(self) -> dict:
        """The report without the fields that legitimately differ between runs."""
        d = self.to_dict()
        d["metadata"] = {k: v for k, v in d["metadata"].items() if k != "timestamp"}
        for r in d["records"]:
            r.pop("wall_time")
        return d


# --- JSON with 17 significant digits ------------------------------------------


def _fmt_float(v: float) -> str:
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    return format(v, ".17g")


def _encode(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(bool(obj) if obj is not None else None))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(pad + json.dumps(str(k), ensure_ascii=False) + ": ")
            _encode(v, indent, level + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            parts = []
            for v in seq:
                sub: list = []
                _encode(v, indent, level + 1, sub)
                parts.append("".join(sub))
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(seq):
            out.append(pad)
            _encode(v, indent, level + 1, out)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    out: list = []
    _encode(obj.to_dict() if hasattr(obj, "to_dict") else obj, indent, 0, out)
    return "".join(out) + "\n"


def _revive(v):
    if v in ("nan", "inf", "-inf"):
        return float(v)
    return v


def loads(text: str) -> ExperimentReport:
    d = json.loads(text)
    for r in d["records"]:
        for key in ("value", "bound"):
            r[key] = _revive(r[key])
    return ExperimentReport.from_dict(d)


# --- writers -------------------------------------------------------------------


def _ensure_dir(out_dir):
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc.strerror}") from exc


def write_json(report: ExperimentReport, out_dir: str) -> str:
    _ensure_dir(out_dir)
    path = os.path.join(out_dir, "report.json")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(report))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def csv_text(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.records:
        row = r.to_dict()
        w.writerow(["" if row[c] is None else (format(row[c], ".17g") if isinstance(row[c], float) else row[c])
                    for c in CSV_COLUMNS])
    return buf.getvalue()


def write_csv(report: ExperimentReport, out_dir: str) -> str:
    _ensure_dir(out_dir)
    path = os.path.join(out_dir, "report.csv")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text(report))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def slope_annotation(ns, values) -> str:
    """'slope ± stderr' of the log-log fit, the error shown at no less than display resolution."""
    fit = rate_fit(ns, values)
    return f"{fit.exponent:.2f} ± {max(fit.stderr, 0.01):.2f}"


def _series(records):
    """Group plottable records into log-log series keyed by (function, family, metric)."""
    groups: dict = {}
    for r in records:
        if r.n is None or isinstance(r.value, bool) or not isinstance(r.value, (int, float)):
            continue
        if not r.value > 0.0 or not math.isfinite(r.value):
            continue
        if r.params.get("plot") is False:
            continue
        groups.setdefault((r.function, r.family, r.metric), []).append((r.n, r.value))
    return {k: sorted(v) for k, v in groups.items() if len({n for n, _ in v}) >= 3}


def write_svg(report: ExperimentReport, out_dir: str) -> List[str]:
    """One log-log plot per check that has at least one series of three or more n."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    _ensure_dir(out_dir)
    paths = []
    checks = []
    for r in report.records:
        if r.check not in checks:
            checks.append(r.check)
    with matplotlib.rc_context({"svg.hashsalt": "logkantorovich", "svg.fonttype": "none"}):
        for check in checks:
            series = _series([r for r in report.records if r.check == check])
            if not series:
                continue
            fig, ax = plt.subplots(figsize=(6.4, 4.8))
            for (fn, fam, metric), pts in series.items():
                ns = [p[0] for p in pts]
                vals = [p[1] for p in pts]
                label = " / ".join(s for s in (fn, fam, metric) if s)
                ax.loglog(ns, vals, marker="o", label=f"{label}  slope {slope_annotation(ns, vals)}")
            ax.set_xlabel("n")
            ax.set_ylabel("value")
            ax.set_title(check)
            ax.legend(fontsize=6)
            path = os.path.join(out_dir, f"{check}.svg")
            try:
                fig.savefig(path, format="svg", metadata={"Date": None})
            except OSError as exc:
                raise OSError(f"cannot write {path}: {exc.strerror}") from exc
            finally:
                plt.close(fig)
            paths.append(path)
    return paths


def emit(report: ExperimentReport, fmt: str, out_dir: str) -> List[str]:
    """Write the report in one format; returns the written paths."""
    if fmt == "json":
        return [write_json(report, out_dir)]
    if fmt == "csv":
        return [write_csv(report, out_dir)]
    if fmt == "svg":
        return write_svg(report, out_dir)
    raise ValueError(f"unknown format {fmt!r}")
