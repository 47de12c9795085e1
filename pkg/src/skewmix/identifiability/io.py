"""Serialization of reports (JSON) and ratio traces (CSV)."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .types import IdentifiabilityReport, RatioTrace, Transform

TRACE_COLUMNS = ("c", "log_abs_ratio", "phase")


def dump_report(report: IdentifiabilityReport, path=None) -> str:
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_report(path) -> IdentifiabilityReport:
    return IdentifiabilityReport.from_dict(json.loads(Path(path).read_text()))


def trace_to_csv(trace: RatioTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for row in zip(trace.c_grid, trace.log_abs_ratio, trace.phase):
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def dump_trace(trace: RatioTrace, path) -> None:
    Path(path).write_text(trace_to_csv(trace))


def load_trace(path, transform: Transform = Transform.CF, direction=None) -> RatioTrace:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = [tuple(float(r[k]) for k in TRACE_COLUMNS) for r in reader]
    c, la, ph = (np.array(col) for col in zip(*rows))
    d = np.array([np.nan]) if direction is None else np.asarray(direction, dtype=float)
    return RatioTrace(c, la, ph, transform, d)
