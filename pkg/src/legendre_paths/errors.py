"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes (2 for domain/validation problems,
3 for capacity guards, 4 for invariant violations).
"""


class LegendrePathsError(Exception):
    """Base class for errors raised by this package."""


class DomainError(LegendrePathsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapacityError(LegendrePathsError, ValueError):
    """An argument exceeds a desk-scale capacity guard."""


class InvariantError(LegendrePathsError, RuntimeError):
    """An internal invariant was found to be violated."""
