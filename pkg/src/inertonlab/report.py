"""Verification report structure and the CSV / report writers."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

CSV_COLUMNS = ("t", "X", "Xdot", "x", "xdot", "H_eff", "L17", "radical")
_STATE_COLUMNS = CSV_COLUMNS[:5]


def format_number(v) -> str:
    """17 significant digits, mantissa ``d.dddddddddddddddd`` and a bare exponent (``e0``, ``e-3``)."""
    v = float(v)
    if not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    mantissa, exponent = f"{v:.16e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def csv_text(series, columns=CSV_COLUMNS) -> str:
    cols = []
    for name in columns:
        if name in _STATE_COLUMNS:
            cols.append(np.asarray(getattr(series, name), dtype=float))
        else:
            # diagnostics that were never attached are written as nan
            cols.append(np.asarray(series.diagnostics.get(name, np.full(len(series), np.nan)), dtype=float))
    lines = [",".join(columns)]
    for row in zip(*cols):
        lines.append(",".join(format_number(v) for v in row))
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def emit_csv(series, path, columns=CSV_COLUMNS) -> Path:
    """Write a trajectory series; identical input gives byte-identical output."""
    if len(series) == 0:
        raise ValueError("refusing to write an empty series")
    return write_text(path, csv_text(series, columns))


def table_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format_number(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


@dataclass
class CheckPart:
    name: str
    relation: str
    residual: float
    tolerance: float
    passed: bool
    notes: str = ""


@dataclass
class Check:
    id: str
    title: str
    parts: list = field(default_factory=list)
    notes: str = ""

    @property
    def passed(self):
        return bool(self.parts) and all(p.passed for p in self.parts)

    def add(self, name, relation, residual, tolerance, passed=None, notes=""):
        residual = float(residual)
        if passed is None:
            passed = math.isfinite(residual) and residual <= tolerance
        self.parts.append(CheckPart(name, relation, residual, float(tolerance), bool(passed), notes))
        return self


@dataclass
class Discrepancy:
    id: str
    title: str
    relation: str
    summary: dict
    profile_header: tuple
    profile: list
    notes: str = ""


@dataclass
class VerificationReport:
    config: dict
    checks: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def status(self):
        return "PASS" if self.passed else "FAIL"


def _num(v):
    return f"{float(v):.6e}"


def report_text(rep: VerificationReport) -> str:
    out = ["inertonlab verification report", ""]
    out.append("config: " + " ".join(f"{k}={v}" for k, v in rep.config.items()))
    out.append("")
    out.append("checks:")
    for chk in rep.checks:
        out.append(f"[{'PASS' if chk.passed else 'FAIL'}] {chk.id} {chk.title}")
        for p in chk.parts:
            line = (
                f"    {'pass' if p.passed else 'FAIL'}  {p.name}  relation: {p.relation}"
                f"  residual={_num(p.residual)}  tolerance={_num(p.tolerance)}"
            )
            if p.notes:
                line += f"  ({p.notes})"
            out.append(line)
    out.append("")
    out.append("documented discrepancies (reported, not part of the overall status):")
    for d in rep.discrepancies:
        out.append(f"  {d.id} {d.title}")
        out.append(f"    relation: {d.relation}")
        for k, v in d.summary.items():
            out.append(f"    {k} = {_num(v) if isinstance(v, (int, float)) else v}")
        if d.notes:
            out.append(f"    note: {d.notes}")
        out.append("    profile: " + ", ".join(d.profile_header))
        for row in d.profile:
            out.append("      " + ", ".join(_num(v) for v in row))
    out.append("")
    out.append(f"OVERALL: {rep.status}")
    return "\n".join(out) + "\n"


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return _jsonable(v.item())
    return v


def report_dict(rep: VerificationReport) -> dict:
    return _jsonable({
        "overall": rep.status,
        "config": rep.config,
        "checks": [
            {"id": c.id, "title": c.title, "status": "PASS" if c.passed else "FAIL",
             "parts": [asdict(p) for p in c.parts]}
            for c in rep.checks
        ],
        "discrepancies": [asdict(d) for d in rep.discrepancies],
    })


def report_json(rep: VerificationReport) -> str:
    return json.dumps(report_dict(rep), indent=2, allow_nan=False) + "\n"


def emit_report(rep: VerificationReport, path, fmt="text") -> Path:
    if fmt == "text":
        return write_text(path, report_text(rep))
    if fmt == "json":
        return write_text(path, report_json(rep))
    raise ValueError(f"unknown report format {fmt!r}")
