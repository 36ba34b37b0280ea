from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckResult:
    """Outcome of one mechanical verification."""

    check: str
    params: dict[str, Any]
    passed: bool
    witnesses: list[Any] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def fail(self, witness: Any) -> None:
        self.passed = False
        self.witnesses.append(witness)
