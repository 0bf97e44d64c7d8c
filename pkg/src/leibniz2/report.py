"""Verification reports with reproducible witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

#: failures stored per check; the total count is always kept
DEFAULT_WITNESS_CAP = 20


def serialize_value(v) -> Any:
    """JSON-friendly rendering of a residual."""
    if isinstance(v, np.ndarray):
        return [serialize_value(e) for e in v.tolist()]
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (list, tuple)):
        return [serialize_value(e) for e in v]
    if isinstance(v, str):
        return v
    to_text = getattr(v, "to_text", None)
    if to_text is not None:
        return to_text()
    return str(v)


@dataclass
class Failure:
    witness: tuple[str, ...]
    residual: Any

    def to_dict(self) -> dict:
        return {"witness": list(self.witness), "residual": serialize_value(self.residual)}

    @classmethod
    def from_dict(cls, d: dict) -> "Failure":
        return cls(tuple(d["witness"]), d["residual"])


@dataclass
class CheckResult:
    """Outcome of one named identity over all tested tuples."""

    name: str
    label: str = ""
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)
    failure_count: int = 0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def record(self, witness, residual, cap: int = DEFAULT_WITNESS_CAP) -> None:
        self.failure_count += 1
        if len(self.failures) < cap:
            self.failures.append(Failure(tuple(str(w) for w in witness), residual))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "label": self.label,
            "pass": self.passed,
            "checked": self.checked,
            "failure_count": self.failure_count,
            "failures": [f.to_dict() for f in self.failures],
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckResult":
        r = cls(d["name"], d.get("label", ""), d.get("checked", 0),
                [Failure.from_dict(f) for f in d.get("failures", [])],
                d.get("failure_count", 0), d.get("note", ""))
        if r.passed != d.get("pass", r.passed):
            raise ValueError(f"inconsistent pass flag for check {r.name!r}")
        return r


@dataclass
class VerifyReport:
    subject: str = ""
    checks: list[CheckResult] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)
    seconds: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def add(self, name: str, label: str = "") -> CheckResult:
        c = CheckResult(name, label)
        self.checks.append(c)
        return c

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def failed_names(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def extend(self, other: "VerifyReport", prefix: str = "") -> "VerifyReport":
        for c in other.checks:
            c2 = CheckResult(prefix + c.name, c.label, c.checked, list(c.failures),
                             c.failure_count, c.note)
            self.checks.append(c2)
        for k, v in other.notes.items():
            self.notes[prefix + k] = v
        return self

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {
            "subject": self.subject,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "notes": {k: serialize_value(v) for k, v in self.notes.items()},
        }
        if include_timing and self.seconds is not None:
            d["seconds"] = self.seconds
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "VerifyReport":
        r = cls(d.get("subject", ""), [CheckResult.from_dict(c) for c in d.get("checks", [])],
                dict(d.get("notes", {})), d.get("seconds"))
        if "pass" in d and d["pass"] != r.passed:
            raise ValueError("overall pass flag disagrees with the checks")
        return r

    def to_text(self) -> str:
        lines = [f"{self.subject}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            tag = "pass" if c.passed else f"FAIL ({c.failure_count})"
            label = f" [{c.label}]" if c.label else ""
            extra = f"  {c.note}" if c.note else ""
            lines.append(f"  {c.name}{label}: {tag}, {c.checked} tuples{extra}")
            for f in c.failures:
                lines.append(f"    witness ({', '.join(f.witness)}): residual {serialize_value(f.residual)}")
        for k, v in self.notes.items():
            lines.append(f"  note {k} = {serialize_value(v)}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()
