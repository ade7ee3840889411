"""Verification reports shared by every check in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    label: str
    ok: bool
    lhs: Any = None
    rhs: Any = None
    known_issue: str | None = None  # documented discrepancy: a failure here does not fail the report

    @property
    def status(self) -> str:
        if self.known_issue:
            return "XPASS" if self.ok else "XFAIL"
        return "PASS" if self.ok else "FAIL"

    def to_json(self) -> dict:
        out = {"label": self.label, "ok": self.ok, "lhs": _jsonable(self.lhs), "rhs": _jsonable(self.rhs)}
        if self.known_issue:
            out["known_issue"] = self.known_issue
        return out


@dataclass
class Report:
    name: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok or c.known_issue for c in self.checks)

    def add(self, label: str, ok: bool, lhs: Any = None, rhs: Any = None, known_issue: str | None = None) -> bool:
        self.checks.append(Check(label, bool(ok), lhs, rhs, known_issue))
        return bool(ok)

    def equal(self, label: str, lhs: Any, rhs: Any) -> bool:
        return self.add(label, lhs == rhs, lhs, rhs)

    def extend(self, other: "Report", prefix: str | None = None) -> None:
        pre = f"{prefix or other.name}: "
        for c in other.checks:
            self.checks.append(Check(pre + c.label, c.ok, c.lhs, c.rhs, c.known_issue))
        self.notes.extend(pre + n for n in other.notes)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok and not c.known_issue]

    def known_failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok and c.known_issue]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "notes": list(self.notes),
        }

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            out.append(f"[{c.status}] {self.name}: {c.label}")
            if c.known_issue and not c.ok:
                out.append(f"        known issue: {c.known_issue}")
            if not c.ok:
                out.append(f"        lhs = {c.lhs!r}")
                out.append(f"        rhs = {c.rhs!r}")
        out.extend(f"  note: {n}" for n in self.notes)
        return out


def _jsonable(v: Any) -> Any:
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)
