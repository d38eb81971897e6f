"""Time-causal and time-recursive spatio-temporal receptive fields."""
from .errors import (
    InsufficientHistoryError,
    InvalidParameterError,
    NoMaximumFoundError,
    NumericInstabilityError,
    PoleEvaluationError,
    ShapeMismatchError,
    TooSmallImageError,
)
from .scale_distribution import ScaleDistribution

__version__ = "0.1.0"
