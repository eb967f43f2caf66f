"""Exception hierarchy shared by all engines."""


class QuadReturnsError(ValueError):
    """Base class for every error raised by this package."""


class NonPositiveProbability(QuadReturnsError):
    pass


class SumNotOne(QuadReturnsError):
    pass


class ParityMismatch(QuadReturnsError):
    """Endpoint/length parity is impossible for +-1 steps, or a bridge-type
    conditioning was requested at odd length."""


ParityViolation = ParityMismatch


class CapacityExceeded(QuadReturnsError):
    pass


class CapTooLarge(CapacityExceeded):
    pass


class OutOfRange(QuadReturnsError):
    pass


class WindowViolation(QuadReturnsError):
    pass


class NegativeArgument(QuadReturnsError):
    pass


class ZeroUnsupported(QuadReturnsError):
    pass


class BudgetExhausted(UserWarning):
    """Emitted (not raised) when a Monte Carlo run accepts no trial."""
