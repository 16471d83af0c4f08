"""Multiply-accumulate counters threaded through the construction routines."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field


@dataclass
class OpCounter:
    """Counts multiply-accumulates by phase and by CBC dimension (1-based).

    Pass an instance explicitly; nothing in the package keeps global counts.
    """

    phases: dict = field(default_factory=lambda: defaultdict(int))
    steps: dict = field(default_factory=lambda: defaultdict(int))
    detail: dict = field(default_factory=lambda: defaultdict(int))

    def add(self, n: int, phase: str, dim: int | None = None) -> None:
        self.phases[phase] += int(n)
        if dim is not None:
            self.steps[dim] += int(n)
            self.detail[phase, dim] += int(n)

    @property
    def total(self) -> int:
        return sum(self.phases.values())

    def phase(self, name: str) -> int:
        return self.phases.get(name, 0)

    def step(self, d: int, phase: str | None = None) -> int:
        if phase is None:
            return self.steps.get(d, 0)
        return self.detail.get((phase, d), 0)


def count(counter: OpCounter | None, n: int, phase: str, dim: int | None = None) -> None:
    if counter is not None:
        counter.add(n, phase, dim)
