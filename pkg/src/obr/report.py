from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

MAX_COUNTEREXAMPLES = 5


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    checked: int = 0
    applicable: bool = True
    counterexamples: list[Any] = field(default_factory=list)
    informational: bool = False

    def record(self, ok: bool, witness: Any = None) -> None:
        self.checked += 1
        if not ok:
            self.passed = False
            if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
                self.counterexamples.append(witness)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "applicable": self.applicable,
            "informational": self.informational,
            "counterexamples": [_plain(c) for c in self.counterexamples],
        }


def _plain(x: Any) -> Any:
    if isinstance(x, (list, tuple)):
        return [_plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (bool, int, float)) or x is None:
        return x
    return str(x)


@dataclass
class Report:
    """Named checks; ``passed`` ignores informational entries."""

    title: str
    checks: dict[str, CheckResult] = field(default_factory=dict)

    def check(self, name: str, informational: bool = False) -> CheckResult:
        if name not in self.checks:
            self.checks[name] = CheckResult(name, informational=informational)
        return self.checks[name]

    def __getitem__(self, name: str) -> CheckResult:
        return self.checks[name]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values() if not c.informational)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks.values() if not c.passed and not c.informational]

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks.values()],
        }

    def __str__(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks.values():
            tag = "info" if c.informational else ("pass" if c.passed else "FAIL")
            line = f"  {c.name}: {tag} ({c.checked} checked)"
            if c.counterexamples:
                line += f" e.g. {_plain(c.counterexamples[0])}"
            lines.append(line)
        return "\n".join(lines)
