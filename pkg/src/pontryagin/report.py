from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    check: str
    witness: tuple
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.check} fails at {self.witness}"
        return f"{text}: {self.detail}" if self.detail else text


@dataclass
class ValidationReport:
    """Collected invariant violations; an empty report means valid."""

    subject: str
    violations: list[Violation] = field(default_factory=list)
    checks: list[str] = field(default_factory=list)

    def add(self, check: str, witness: tuple, detail: str = "") -> None:
        self.violations.append(Violation(check, tuple(witness), detail))

    def ran(self, check: str) -> None:
        if check not in self.checks:
            self.checks.append(check)

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        for check in other.checks:
            self.ran(prefix + check)
        for v in other.violations:
            self.violations.append(Violation(prefix + v.check, v.witness, v.detail))

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def failed_checks(self) -> list[str]:
        seen: list[str] = []
        for v in self.violations:
            if v.check not in seen:
                seen.append(v.check)
        return seen

    def summary(self, limit: int = 5) -> str:
        if self.ok:
            return f"{self.subject}: all checks passed"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        for v in self.violations[:limit]:
            lines.append(f"  {v}")
        if len(self.violations) > limit:
            lines.append(f"  ... {len(self.violations) - limit} more")
        return "\n".join(lines)
