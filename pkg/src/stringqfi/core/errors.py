"""
Exception hierarchy shared by every stringqfi module.

The CLI maps these onto exit codes (see ``stringqfi.cli.main``).
"""
from __future__ import annotations


class StringQfiError(Exception):
    """Base class for all stringqfi errors."""


class DomainError(StringQfiError, ValueError):
    """Input outside the domain or validated range of an operation."""


class InvalidStateError(DomainError):
    """Bloch vector outside the unit ball."""


class UsageError(StringQfiError, ValueError):
    """Malformed command-line or config-file input."""


class ConvergenceError(StringQfiError, RuntimeError):
    """
    A numerical scheme failed to meet its error budget.

    Attributes
    ----------
    partial_value
        Best value reached before giving up.
    achieved_error
        Error estimate attached to ``partial_value``.
    """

    def __init__(self, message: str, partial_value: float = float("nan"), achieved_error: float = float("inf")):
        super().__init__(message)
        self.partial_value = partial_value
        self.achieved_error = achieved_error
