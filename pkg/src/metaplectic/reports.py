"""Pass/fail bookkeeping shared by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ClauseResult:
    name: str
    checked: int = 0
    failed: int = 0
    counterexample: str | None = None
    note: str | None = None

    def record(self, ok: bool, detail=None) -> bool:
        self.checked += 1
        if not ok:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = detail() if callable(detail) else str(detail)
        return ok

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "failed": self.failed,
            "passed": self.checked - self.failed,
            "ok": self.ok,
            "counterexample": self.counterexample,
            "note": self.note,
        }


@dataclass
class VerificationReport:
    title: str
    clauses: dict[str, ClauseResult] = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    def clause(self, name: str) -> ClauseResult:
        if name not in self.clauses:
            self.clauses[name] = ClauseResult(name)
        return self.clauses[name]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.clauses.values())

    def first_counterexample(self) -> str | None:
        for c in self.clauses.values():
            if not c.ok:
                return f"{c.name}: {c.counterexample}"
        return None

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "clauses": [c.to_dict() for c in self.clauses.values()],
            "data": self.data,
        }
