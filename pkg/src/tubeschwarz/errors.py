"""Shared exception types."""


class DomainError(ValueError):
    """Input lies outside the domain a function is defined on."""


class PoleError(ZeroDivisionError):
    """Evaluation requested at (or too close to) a pole."""


class GridError(ValueError):
    """A sampling grid is empty or too coarse for the requested operation."""
