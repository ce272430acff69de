"""Structured results for the verification checks.

Every checker returns a CheckReport.  Exact residuals are serialized as
"num/den" strings so reports are bit-reproducible; anything timing-related
is kept out of CheckReport entirely.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    check: str
    params: dict
    violations: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    skipped: str | None = None

    @property
    def ok(self) -> bool:
        return self.skipped is None and not self.violations

    @property
    def status(self) -> str:
        if self.skipped is not None:
            return "skip"
        return "pass" if self.ok else "fail"

    def add_violation(self, **fields) -> None:
        self.violations.append(dict(fields))

    def as_dict(self) -> dict:
        out = {
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "violations": self.violations,
            "details": self.details,
        }
        if self.skipped is not None:
            out["reason"] = self.skipped
        return out
