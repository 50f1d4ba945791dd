"""Exception types shared across the package.

The hierarchy mirrors the CLI exit-code contract: argument problems are
ordinary ``ValueError``/``click`` errors, mathematical-domain violations are
:class:`DomainError` (exit code 3), and quadrature failures are
:class:`ConvergenceError` (exit code 4).
"""

from __future__ import annotations


class DomainError(ValueError):
    """A parameter lies outside the mathematical domain of an operation."""


class SingularPointError(DomainError):
    """Evaluation was requested exactly at a singular point of the operator."""


class ConvergenceError(RuntimeError):
    """An adaptive integration failed to reach its error target.

    Attributes
    ----------
    result:
        Best estimate available when the budget ran out (a
        :class:`~ckernels.quadrature.QuadResult`), or ``None``.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class ContourError(ConvergenceError):
    """A contour integrand was singular or non-finite on the chosen line."""
