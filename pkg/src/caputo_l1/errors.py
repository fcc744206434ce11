"""Exception types raised by the library."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a function."""


class NoConvergenceError(ArithmeticError):
    """A quadrature could not reach the requested tolerance."""


class DegenerateDifferenceError(ArithmeticError):
    """An order estimate is undefined because a grid difference vanished."""
