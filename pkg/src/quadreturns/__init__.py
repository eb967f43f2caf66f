"""Returns to the axes of nearest-neighbour walks in the quarter plane."""

from .errors import (
    BudgetExhausted,
    CapacityExceeded,
    CapTooLarge,
    NegativeArgument,
    NonPositiveProbability,
    OutOfRange,
    ParityMismatch,
    QuadReturnsError,
    SumNotOne,
    WindowViolation,
    ZeroUnsupported,
)
from .walk import Conditioning, Parity, StepDistribution, tilt_factor, validate

__version__ = "0.1.0"

__all__ = [
    "BudgetExhausted",
    "CapacityExceeded",
    "CapTooLarge",
    "Conditioning",
    "NegativeArgument",
    "NonPositiveProbability",
    "OutOfRange",
    "Parity",
    "ParityMismatch",
    "QuadReturnsError",
    "StepDistribution",
    "SumNotOne",
    "WindowViolation",
    "ZeroUnsupported",
    "tilt_factor",
    "validate",
    "__version__",
]
