"""Walk parameters, conditionings and the exponential tilt of a 1D simple walk.

A walk is given by the four step probabilities ``(p1, q1, p2, q2)`` of the
moves East, West, North, South. Values are either all :class:`fractions.Fraction`
(rational backend, exact arithmetic) or all ``float``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import NonPositiveProbability, ParityMismatch, SumNotOne

Number = Union[Fraction, float]

FLOAT_SUM_TOL = 1e-12
FLOAT_ZERO_DRIFT_TOL = 1e-15

# Rational arithmetic is refused above this length.
EXACT_MAX_N = 4096
# backend="auto" picks rational arithmetic up to this length only.
AUTO_EXACT_MAX_N = 64


class Drift(enum.Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE = "negative"


class Conditioning(enum.Enum):
    UNCONDITIONED = "none"
    BRIDGE = "bridge"
    MEANDER = "meander"
    NONNEG_BRIDGE = "nnb"

    @property
    def requires_even(self) -> bool:
        return self in (Conditioning.BRIDGE, Conditioning.NONNEG_BRIDGE)

    @property
    def pins_endpoint(self) -> bool:
        return self.requires_even

    @property
    def needs_survival(self) -> bool:
        return self in (Conditioning.MEANDER, Conditioning.NONNEG_BRIDGE)

    @classmethod
    def parse(cls, value: Union[str, "Conditioning"]) -> "Conditioning":
        if isinstance(value, Conditioning):
            return value
        key = value.strip().lower().replace("-", "_")
        aliases = {
            "none": cls.UNCONDITIONED,
            "unconditioned": cls.UNCONDITIONED,
            "bridge": cls.BRIDGE,
            "meander": cls.MEANDER,
            "nnb": cls.NONNEG_BRIDGE,
            "excursion": cls.NONNEG_BRIDGE,
            "nonnegative_bridge": cls.NONNEG_BRIDGE,
            "non_negative_bridge": cls.NONNEG_BRIDGE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown conditioning {value!r}") from None


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of(cls, n: int) -> "Parity":
        return cls.EVEN if n % 2 == 0 else cls.ODD

    @property
    def bit(self) -> int:
        return 0 if self is Parity.EVEN else 1

    @classmethod
    def parse(cls, value: Union[str, "Parity", int]) -> "Parity":
        if isinstance(value, Parity):
            return value
        if isinstance(value, int):
            return cls.of(value)
        return cls(value.strip().lower())


def check_conditioning(n: int, conditioning: Conditioning) -> None:
    if n < 0:
        raise ValueError("length must be non-negative")
    if conditioning.requires_even and n % 2:
        raise ParityMismatch(
            f"{conditioning.value} conditioning needs an even length, got n={n}"
        )


def parse_probability(text: Union[str, Number]) -> Number:
    """Parse ``"1/4"`` or ``"0.1"`` into an exact Fraction; pass numbers through."""
    if isinstance(text, (Fraction, float, int)):
        return text
    s = text.strip()
    if not s:
        raise ValueError("empty probability")
    try:
        return Fraction(s)
    except ValueError:
        value = float(s)
        if not math.isfinite(value):
            raise ValueError(f"non-finite probability {s!r}") from None
        return value


def _drift(p: Number, q: Number) -> Drift:
    d = p - q
    if isinstance(d, Fraction):
        zero = d == 0
    else:
        zero = abs(d) <= FLOAT_ZERO_DRIFT_TOL
    if zero:
        return Drift.ZERO
    return Drift.POSITIVE if d > 0 else Drift.NEGATIVE


@dataclass(frozen=True)
class StepDistribution:
    """Probabilities of the steps E, W, N, S. Build through :func:`validate`."""

    p1: Number
    q1: Number
    p2: Number
    q2: Number

    @property
    def is_rational(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.probabilities)

    @property
    def probabilities(self) -> tuple:
        return (self.p1, self.q1, self.p2, self.q2)

    @property
    def h1(self) -> Number:
        return self.p1 + self.q1

    @property
    def h2(self) -> Number:
        return self.p2 + self.q2

    def h(self, axis: int) -> Number:
        return self.h1 if axis == 1 else self.h2

    def pq(self, axis: int) -> tuple:
        return (self.p1, self.q1) if axis == 1 else (self.p2, self.q2)

    @property
    def tilde_p1(self) -> Number:
        return self.p1 / self.h1

    @property
    def tilde_q1(self) -> Number:
        return self.q1 / self.h1

    @property
    def tilde_p2(self) -> Number:
        return self.p2 / self.h2

    @property
    def tilde_q2(self) -> Number:
        return self.q2 / self.h2

    def drift(self, axis: int) -> Drift:
        return _drift(*self.pq(axis))

    @property
    def drift_class(self) -> tuple:
        return (self.drift(1), self.drift(2))

    def swapped(self) -> "StepDistribution":
        """Exchange the roles of the two axes."""
        return StepDistribution(self.p2, self.q2, self.p1, self.q1)

    def as_float(self) -> "StepDistribution":
        return StepDistribution(*(float(v) for v in self.probabilities))

    def as_exact(self) -> "StepDistribution":
        """Rational copy; floats are read through their shortest decimal repr."""
        if self.is_rational:
            return self
        return validate([Fraction(repr(float(v))) for v in self.probabilities])

    def spec_string(self) -> str:
        return ",".join(str(v) for v in self.probabilities)


def validate(raw: Union[str, Sequence[Union[str, Number]]]) -> StepDistribution:
    """Check four step probabilities and return a :class:`StepDistribution`.

    A single string is split on commas. Strings are parsed with
    :func:`parse_probability`. If every entry is
    rational the sum must be exactly one; otherwise everything is converted to
    float and the sum may deviate by at most ``FLOAT_SUM_TOL``.
    """
    if isinstance(raw, str):
        raw = raw.split(",")
    values = [parse_probability(v) for v in raw]
    if len(values) != 4:
        raise ValueError(f"expected four probabilities, got {len(values)}")
    rational = all(isinstance(v, (Fraction, int)) for v in values)
    if rational:
        values = [Fraction(v) for v in values]
    else:
        values = [float(v) for v in values]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("probabilities must be finite")
    for name, v in zip(("p1", "q1", "p2", "q2"), values):
        if not v > 0:
            raise NonPositiveProbability(f"{name}={v} is not strictly positive")
    total = sum(values)
    if rational:
        if total != 1:
            raise SumNotOne(f"probabilities sum to {total}, not 1")
    elif abs(total - 1.0) > FLOAT_SUM_TOL:
        raise SumNotOne(f"probabilities sum to {total!r}, not 1")
    return StepDistribution(*values)


@dataclass(frozen=True)
class TiltParams:
    rho: float
    tilt_point: float
    symmetric: bool


def tilt_params(p: Number) -> TiltParams:
    """Minimum ``rho = sqrt(4pq)`` of the step Laplace transform and its argmin."""
    q = 1 - p
    return TiltParams(
        rho=math.sqrt(4 * float(p) * float(q)),
        tilt_point=0.5 * math.log(float(q) / float(p)),
        symmetric=(p == q),
    )


def tilt_factor(p: Number, n: int, x: int) -> Number:
    """Ratio ``P_p(A, S_n = x) / P_{1/2}(A, S_n = x)`` for any path event ``A``.

    Equals ``sqrt(4pq)**n * sqrt(p/q)**x``, which is the rational number
    ``(4pq)**((n - x)/2) * (2p)**x`` since ``n - x`` is even.
    """
    if n < 0 or abs(x) > n:
        raise ValueError(f"endpoint {x} unreachable in {n} steps")
    if (n - x) % 2:
        raise ParityMismatch(f"endpoint {x} has the wrong parity for n={n}")
    q = 1 - p
    half = (n - x) // 2
    if isinstance(p, Fraction):
        return (4 * p * q) ** half * (2 * p) ** x
    return math.exp(half * math.log(4 * p * q) + x * math.log(2 * p))


def extracted_params(walk: StepDistribution, axis: int) -> tuple:
    """``(p~, q~, h)`` of the 1D walk made of the steps that move ``axis``."""
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    p, q = walk.pq(axis)
    h = p + q
    return (p / h, q / h, h)


def resolve_backend(walk: StepDistribution, n: int, backend: str = "auto") -> str:
    from .errors import CapacityExceeded

    if backend == "auto":
        return "exact" if walk.is_rational and n <= AUTO_EXACT_MAX_N else "float"
    if backend == "exact":
        if n > EXACT_MAX_N:
            raise CapacityExceeded(
                f"rational backend is capped at n={EXACT_MAX_N}, got n={n}"
            )
        return "exact"
    if backend == "float":
        return "float"
    raise ValueError(f"unknown backend {backend!r}")
