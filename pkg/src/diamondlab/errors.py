"""Exception types shared across modules."""

from __future__ import annotations


class BudgetExceededError(RuntimeError):
    """A construction would exceed the configured point or node budget.

    Carries the exact estimate so callers can decide whether to retry
    with a larger budget.
    """

    def __init__(self, message: str, estimate: int | None = None,
                 budget: int | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


class InsufficientBranchingError(RuntimeError):
    """No qualifying branch pair exists at the current truncation width.

    ``branches`` is the width that was searched, ``retry_hint`` the smallest
    width worth rebuilding with, ``level`` the recursion level (0 = root)
    at which the search failed.
    """

    def __init__(self, message: str, branches: int, retry_hint: int,
                 level: int = 0):
        super().__init__(message)
        self.branches = branches
        self.retry_hint = retry_hint
        self.level = level


class CertificateError(ValueError):
    """An optimality or feasibility certificate failed re-verification."""


class FormatError(ValueError):
    """A serialized artifact does not follow its file format."""
