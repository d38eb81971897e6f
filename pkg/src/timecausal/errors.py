"""Exception types raised by the library.

All of them derive from a builtin so callers can catch ``ValueError`` or
``ArithmeticError`` without importing this module.
"""


class InvalidParameterError(ValueError):
    """A scale, count or tolerance outside its admissible range."""

    def __init__(self, message: str):
        super().__init__(f"invalid-parameter: {message}")


class PoleEvaluationError(ArithmeticError):
    """Transfer function evaluated (numerically) on one of its poles."""


class NumericInstabilityError(ArithmeticError):
    """Partial-fraction evaluation requested for nearly coinciding poles."""


class ShapeMismatchError(ValueError):
    pass


class InsufficientHistoryError(ValueError):
    pass


class NoMaximumFoundError(RuntimeError):
    pass


class TooSmallImageError(ValueError):
    pass
