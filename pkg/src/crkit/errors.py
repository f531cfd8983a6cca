"""Shared exception types."""


class GraphFormatError(ValueError):
    """A graph or circuit file is malformed or violates a structural invariant."""


class BudgetExceededError(RuntimeError):
    """An enumeration or search exceeded its configured budget."""
