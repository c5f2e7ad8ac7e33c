"""Structured pass/fail records with numeric margins."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckRecord:
    name: str
    passed: bool
    margin: float | None = None
    offending: list = field(default_factory=list)
    detail: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "margin": None if self.margin is None else float(self.margin),
            "offending": [list(o) if isinstance(o, tuple) else o for o in self.offending],
            "detail": self.detail,
        }


class VerificationReport:
    """Ordered list of check records; the report passes iff every record passes.

    Checks that were not run (by request or over budget) are listed in
    ``skipped`` with a reason and do not affect the verdict.
    """

    def __init__(self, records=None):
        self.records: list[CheckRecord] = list(records or [])
        self.skipped: list[tuple[str, str]] = []

    def add(self, name, passed, margin=None, offending=(), detail=None) -> CheckRecord:
        rec = CheckRecord(name, bool(passed), margin, list(offending), dict(detail or {}))
        self.records.append(rec)
        return rec

    def skip(self, name: str, reason: str) -> None:
        self.skipped.append((name, reason))

    def extend(self, other: VerificationReport) -> None:
        self.records.extend(other.records)
        self.skipped.extend(other.skipped)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def __getitem__(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(r.name == name for r in self.records)

    def names(self) -> list[str]:
        return [r.name for r in self.records]

    def to_json(self) -> str:
        body = {
            "passed": self.passed,
            "checks": [r.as_dict() for r in self.records],
            "skipped": [{"name": n, "reason": why} for n, why in self.skipped],
        }
        return json.dumps(body, indent=2, allow_nan=True) + "\n"

    def summary(self) -> str:
        lines = []
        for r in self.records:
            flag = "PASS" if r.passed else "FAIL"
            margin = "" if r.margin is None else f"  margin={r.margin:.9g}"
            lines.append(f"{flag}  {r.name}{margin}")
        lines += [f"SKIP  {n}  ({why})" for n, why in self.skipped]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)
