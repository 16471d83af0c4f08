"""Exception types shared across the package."""

from __future__ import annotations


class LatticeError(Exception):
    """Base class for all package errors."""


class ValidationError(LatticeError, ValueError):
    """An instance violates one or more structural invariants.

    ``violations`` lists every problem found, not just the first one.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ScaleLimitError(LatticeError):
    """A brute-force oracle was asked to enumerate more than it allows."""
