"""Report: check results, tables and traces produced by a scenario run.

Files are written deterministically so identical runs give identical
bytes. Floats carry 17 significant digits in CSV; JSON uses sorted keys.
"""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal

ReportFormat = Literal["csv", "json"]


def file_stem(name: str) -> str:
    """Scenario name made safe as a file name inside the output directory."""
    stem = re.sub(r"[^A-Za-z0-9._-]+", "_", name).strip("._")
    return stem or "report"


def format_value(x: Any) -> str:
    """Locale-free text for one cell."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass(frozen=True)
class Check:
    """One pass/fail line of a report.

    Attributes:
        value: Measured quantity (a deviation, a probability, a count)
        tol: Threshold it was compared with (None for exact or boolean checks)
        witness: Where the worst case occurred, when it failed
    """

    name: str
    value: Any
    tol: float | None
    passed: bool
    witness: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "value": self.value,
            "tol": self.tol,
            "passed": self.passed,
            "witness": self.witness,
        }


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {"columns": self.columns, "rows": self.rows}


@dataclass
class Report:
    """Everything a scenario run produced."""

    name: str
    kind: str
    reference: str = ""
    checks: list[Check] = field(default_factory=list)
    tables: list[Table] = field(default_factory=list)
    traces: dict[str, list[float]] = field(default_factory=dict)
    values: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add_check(
        self, name: str, value: Any, tol: float | None, passed: bool, witness: str = ""
    ) -> Check:
        check = Check(name, value, tol, passed, "" if passed else witness)
        self.checks.append(check)
        return check

    def check_at_most(self, name: str, value: float, tol: float, witness: str = "") -> Check:
        return self.add_check(name, value, tol, value <= tol, witness)

    def check_close(self, name: str, value: float, expected: float, tol: float) -> Check:
        return self.add_check(name, value, tol, abs(value - expected) <= tol, f"expected {expected!r}")

    def table(self, name: str) -> Table | None:
        return next((t for t in self.tables if t.name == name), None)

    def to_dict(self) -> dict[str, Any]:
        return _jsonable(
            {
                "name": self.name,
                "kind": self.kind,
                "reference": self.reference,
                "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks],
                "tables": {t.name: t.to_dict() for t in self.tables},
                "traces": self.traces,
                "values": self.values,
            }
        )


# =============================================================================
# Writers
# =============================================================================


def _write_rows(path: Path, columns: list[str], rows: list[list[Any]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([format_value(x) for x in row])


def write_csv(report: Report, out_dir: Path) -> list[Path]:
    """<name>.csv for the main table, <name>_<table>.csv for the rest, plus checks and traces."""
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = file_stem(report.name)
    written = []
    for k, t in enumerate(report.tables):
        path = out_dir / (f"{stem}.csv" if k == 0 else f"{stem}_{t.name}.csv")
        _write_rows(path, t.columns, t.rows)
        written.append(path)
    checks = out_dir / f"{stem}_checks.csv"
    _write_rows(
        checks,
        ["name", "value", "tol", "passed", "witness"],
        [[c.name, c.value, c.tol, c.passed, c.witness] for c in report.checks],
    )
    written.append(checks)
    if report.traces:
        names = list(report.traces)
        length = max(len(v) for v in report.traces.values())
        rows = [
            [k] + [report.traces[n][k] if k < len(report.traces[n]) else None for n in names]
            for k in range(length)
        ]
        traces = out_dir / f"{stem}_traces.csv"
        _write_rows(traces, ["step", *names], rows)
        written.append(traces)
    return written


def write_json(report: Report, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{file_stem(report.name)}.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
    return [path]


def write_report(report: Report, out_dir: Path, fmt: ReportFormat = "csv") -> list[Path]:
    if fmt == "json":
        return write_json(report, out_dir)
    return write_csv(report, out_dir)
