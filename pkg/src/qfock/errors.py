"""Shared exception types.

Everything that can go wrong for a *caller* (as opposed to a bug) gets a
dedicated class so the service layer and CLI can map failures to exit
codes / HTTP statuses without string matching.
"""


class QFockError(Exception):
    """Base class for all qfock errors."""


class SizeError(QFockError):
    """A configured size cap (factorial cap, basis cap, word cap) was exceeded."""


class DomainError(QFockError):
    """Parameter outside its mathematical domain, e.g. |q| >= 1."""


class ConditioningError(QFockError):
    """A Gram block is numerically singular or indefinite at the given q."""


class WindowOverflowError(QFockError):
    """A shifted mode index fell outside the truncated mode window."""


class BoundViolationError(QFockError):
    """A computed norm exceeded the theoretical bound it must respect."""


class ExprSyntaxError(QFockError):
    """Operator-expression parse failure, annotated with source position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
