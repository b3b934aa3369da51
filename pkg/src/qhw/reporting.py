"""Suite reports: per-check records with provenance tags and
deterministic serialization.

JSON output carries no wall-clock data, so identical configurations
produce byte-identical reports; timings go to the text format only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CheckRecord:
    name: str
    expected: object
    got: object
    passed: bool
    provenance: str  # literature | derived | direct

    def as_dict(self):
        return {
            "name": self.name,
            "expected": self.expected,
            "got": self.got,
            "pass": self.passed,
            "provenance": self.provenance,
        }


@dataclass
class SuiteReport:
    suite: str
    quivers: list
    config: dict
    checks: list = field(default_factory=list)
    skipped: str | None = None
    wall_time: float | None = None

    def add(self, name, expected, got, provenance, passed=None):
        if passed is None:
            passed = expected == got
        self.checks.append(CheckRecord(name, expected, got, passed, provenance))
        return passed

    @property
    def passed(self):
        return self.skipped is None and all(c.passed for c in self.checks)

    def as_dict(self):
        return {
            "suite": self.suite,
            "quivers": self.quivers,
            "config": self.config,
            "skipped": self.skipped,
            "checks": [c.as_dict() for c in self.checks],
            "pass": self.passed,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2,
                          default=str) + "\n"

    def to_text(self, with_time=True):
        lines = [f"suite: {self.suite}"]
        for q in self.quivers:
            lines.append(f"  quiver: {q.splitlines()[0]} ...")
        if self.skipped is not None:
            lines.append(f"  SKIPPED: {self.skipped}")
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(
                f"  [{mark}] {c.name} [{c.provenance}] "
                f"expected={c.expected} got={c.got}"
            )
        if self.skipped is not None:
            lines.append("  result: SKIP")
        else:
            lines.append(f"  result: {'PASS' if self.passed else 'FAIL'}")
        if with_time and self.wall_time is not None:
            lines.append(f"  wall time: {self.wall_time:.2f}s")
        return "\n".join(lines) + "\n"

    def to_csv(self):
        rows = ["suite,check,provenance,expected,got,pass"]
        for c in self.checks:
            rows.append(
                f"{self.suite},{c.name},{c.provenance},"
                f"\"{c.expected}\",\"{c.got}\",{c.passed}"
            )
        return "\n".join(rows) + "\n"


def render(reports, fmt):
    if fmt == "json":
        blob = {
            "reports": [r.as_dict() for r in reports],
            "pass": all(r.passed for r in reports),
        }
        return json.dumps(blob, sort_keys=True, indent=2, default=str) + "\n"
    if fmt == "csv":
        return "".join(r.to_csv() for r in reports)
    return "".join(r.to_text() for r in reports)
