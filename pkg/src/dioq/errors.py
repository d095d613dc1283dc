"""Exception types shared across the package."""


class DioqError(Exception):
    """Base class for all errors raised by this package."""


class TermParseError(DioqError, ValueError):
    """Raised when a term, equation or formula cannot be parsed."""

    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class BudgetExceeded(DioqError):
    """A configured resource budget ran out before the computation finished.

    This is never a verdict: callers must report it distinctly from UNSAT.
    """


class RewriteBudgetExceeded(BudgetExceeded):
    pass


class ExpansionBudgetExceeded(BudgetExceeded):
    pass


class SearchBudgetExceeded(BudgetExceeded):
    pass


class InvariantViolation(DioqError, AssertionError):
    """An internal postcondition failed; indicates a bug, not bad input."""
