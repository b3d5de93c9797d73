"""Check reports shared by every inequality verifier."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

MAX_WITNESSES = 10


def _finite(x: float):
    if x is None or math.isfinite(x):
        return x
    return "inf" if x > 0 else "-inf"


@dataclass
class CheckReport:
    """Outcome of checking ``lhs <= rhs * (1 + rel_slack)`` over a grid.

    ``worst_log_ratio`` is the smallest value of log(rhs / lhs) seen, so
    a positive number means every instance held with room to spare.
    """

    lemma: str
    grid: str = ""
    rel_slack: float = 1e-12
    checked: int = 0
    violations: int = 0
    worst_log_ratio: float = math.inf
    worst_witness: Any = None
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record_log(self, log_lhs: float, log_rhs: float, witness: Any = None) -> bool:
        """Record one instance given in log space; returns True on pass."""
        self.checked += 1
        if log_lhs == -math.inf:
            ratio = math.inf
        elif log_rhs == -math.inf:
            ratio = -math.inf
        else:
            ratio = log_rhs - log_lhs
        if ratio < self.worst_log_ratio:
            self.worst_log_ratio = ratio
            self.worst_witness = witness
        ok = ratio >= -math.log1p(self.rel_slack)
        if not ok:
            self.violations += 1
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append({"witness": witness, "log_lhs": _finite(log_lhs),
                                       "log_rhs": _finite(log_rhs)})
        return ok

    def record(self, lhs: float, rhs: float, witness: Any = None) -> bool:
        if lhs < 0 or rhs < 0:
            raise ValueError("record() expects non-negative sides; use record_log")
        return self.record_log(math.log(lhs) if lhs > 0 else -math.inf,
                               math.log(rhs) if rhs > 0 else -math.inf, witness)

    def record_equal(self, ok: bool, witness: Any = None) -> bool:
        """Record an exact identity check; no ratio is tracked."""
        self.checked += 1
        if not ok:
            self.violations += 1
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append({"witness": witness})
        return ok

    def merge(self, other: "CheckReport") -> "CheckReport":
        self.checked += other.checked
        self.violations += other.violations
        if other.worst_log_ratio < self.worst_log_ratio:
            self.worst_log_ratio = other.worst_log_ratio
            self.worst_witness = other.worst_witness
        room = MAX_WITNESSES - len(self.witnesses)
        self.witnesses.extend(other.witnesses[:max(room, 0)])
        self.notes.extend(other.notes)
        return self

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "grid": self.grid,
            "rel_slack": self.rel_slack,
            "checked": self.checked,
            "violations": self.violations,
            "passed": self.passed,
            "worst_log_ratio": _finite(self.worst_log_ratio),
            "worst_witness": _jsonable(self.worst_witness),
            "witnesses": _jsonable(self.witnesses),
            "notes": list(self.notes),
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"[{status}] {self.lemma}: {self.checked} checked, {self.violations} violations"
        if math.isfinite(self.worst_log_ratio):
            line += f", worst log(rhs/lhs) = {_fmt(self.worst_log_ratio)}"
        return line


def _fmt(x: float) -> str:
    return str(x) if not math.isfinite(x) else f"{x:.3e}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        return _finite(obj)
    if obj is None or isinstance(obj, (int, str, bool)):
        return obj
    return str(obj)


def reports_to_json(reports: list[CheckReport], **header) -> str:
    payload = {"schema": 1, **header, "reports": [r.to_dict() for r in reports]}
    return json.dumps(payload, indent=2, sort_keys=True)


def reports_to_csv(reports: list[CheckReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lemma", "checked", "violations", "worst_log_ratio"])
    for r in reports:
        w.writerow([r.lemma, r.checked, r.violations, _fmt(r.worst_log_ratio)])
    return buf.getvalue()
