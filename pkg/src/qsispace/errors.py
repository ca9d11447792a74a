"""Exception hierarchy for the sampling toolkit.

Errors fall into three behavioral groups, which the command-line harness maps
to exit codes: usage problems (bad arguments, malformed configuration),
numeric problems (tolerances unattainable, ill-conditioned systems, evaluation
outside a validated domain), and verdict failures (experiments that ran fine
but did not exhibit the expected behavior; those are signalled by return
values, not exceptions).
"""

from __future__ import annotations

__all__ = [
    "QsispaceError",
    "UsageError",
    "DomainError",
    "AccuracyError",
    "ConditioningError",
    "SolvabilityError",
    "DegeneracyError",
]


class QsispaceError(Exception):
    """Base class for all package-specific errors."""


class UsageError(QsispaceError, ValueError):
    """Invalid arguments or configuration (caller error)."""


class DomainError(QsispaceError, ValueError):
    """Evaluation requested outside a function's mathematical domain."""


class AccuracyError(QsispaceError, ArithmeticError):
    """A requested tolerance cannot be met with the given discretization."""


class ConditioningError(QsispaceError, ArithmeticError):
    """A linear system is too ill-conditioned for a trustworthy solve."""


class SolvabilityError(ConditioningError):
    """A collocation system is numerically singular.

    Carries the estimated condition number (``float('inf')`` when the
    factorization failed outright) so reports can record how far gone the
    system was.
    """

    def __init__(self, message: str, kappa: float = float("inf")):
        super().__init__(message)
        self.kappa = kappa


class DegeneracyError(QsispaceError, ArithmeticError):
    """A denominator fell below its positivity floor (degenerate symbol)."""
