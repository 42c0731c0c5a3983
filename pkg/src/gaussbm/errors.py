"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class UnsupportedCombinationError(ValueError):
    """Two shapes cannot be combined in closed form."""


class ConvergenceError(ArithmeticError):
    """Adaptive quadrature hit its depth cap before reaching the tolerance.

    The best available estimate is kept on ``result`` so callers can still
    inspect it.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class SearchError(RuntimeError):
    """A bracketing root search found no sign change."""


class EvaluationError(ArithmeticError):
    """A derived quantity could not be evaluated (e.g. log of a zero measure)."""
