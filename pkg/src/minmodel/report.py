"""Verification reports shared by the library checks and the command line."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of a verification sweep; ``passed`` iff no counterexample."""

    suite: str
    checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def fail(self, **info) -> None:
        self.counterexamples.append(info)

    def summary(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        return f"{self.suite}: {state} ({self.checked} checked, {len(self.counterexamples)} counterexamples)"
