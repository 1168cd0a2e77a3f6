"""
Error types raised when a numerical precondition does not hold.

Every error names the parameter that violated its precondition so the command-line
runner can report it and exit with the numerical-precondition code.
"""

from typing import Optional


class PreconditionError(ValueError):
    """A numerical precondition was violated."""

    def __init__(self, message: str, parameter: Optional[str] = None):
        super().__init__(message)
        self.parameter = parameter


class DomainError(PreconditionError):
    """An argument lies outside the mathematical domain of an operation."""


class ResolutionError(PreconditionError):
    """A grid or quadrature rule is too coarse for the requested evaluation."""


class BudgetError(PreconditionError):
    """A desk-scale size cap would be exceeded."""
