"""Three-valued verdicts shared by validators, checks and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"


@dataclass
class Verdict:
    check: str
    status: str
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"check": self.check, "status": self.status, "detail": _plain(self.detail)}


@dataclass
class Report:
    subject: str
    verdicts: list[Verdict] = field(default_factory=list)

    def add(self, check: str, ok: bool | None, **detail) -> Verdict:
        status = UNKNOWN if ok is None else (PASS if ok else FAIL)
        v = Verdict(check, status, detail)
        self.verdicts.append(v)
        return v

    def extend(self, other: "Report", prefix: str = "") -> None:
        for v in other.verdicts:
            self.verdicts.append(Verdict(prefix + v.check, v.status, v.detail))

    @property
    def status(self) -> str:
        states = {v.status for v in self.verdicts}
        if FAIL in states:
            return FAIL
        if UNKNOWN in states:
            return UNKNOWN
        return PASS

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.status == FAIL]

    def failed_checks(self) -> set[str]:
        return {v.check for v in self.failures()}

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "status": self.status,
            "verdicts": [v.to_dict() for v in self.verdicts],
        }

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        lines = [f"{self.subject}: {self.status}"]
        for v in self.verdicts:
            if v.status != PASS:
                lines.append(f"  [{v.status}] {v.check} {_plain(v.detail)}")
        return "\n".join(lines)


def _plain(x):
    """JSON-friendly copy (tuples become lists, scalars become text)."""
    from fractions import Fraction

    import numpy as np

    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x
