"""Exact 2D return laws from 1D tables by conditioning on the horizontal-step count.

Given ``H_n = k`` horizontal steps, the horizontal and vertical coordinates are
two independent simple walks of lengths ``k`` and ``n - k`` with step
probabilities ``p_i / h_i``; returns, the endpoint and quadrant survival all
factor. Hence

    P(N1 = r1, N2 = r2, E) = sum_k C(n, k) h1^k h2^(n-k) A1[k, r1] A2[n-k, r2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterator, Optional, Tuple

import numpy as np
from scipy import stats

from . import oned
from .errors import WindowViolation
from .walk import (
    Conditioning,
    Number,
    StepDistribution,
    check_conditioning,
    extracted_params,
    resolve_backend,
)

_FLAGS = {
    Conditioning.UNCONDITIONED: ((True, True), (True, False), (False, True), (False, False)),
    Conditioning.BRIDGE: ((True, True), (True, False)),
    Conditioning.MEANDER: ((True, True), (False, True)),
    Conditioning.NONNEG_BRIDGE: ((True, True),),
}


def _kl(a: float, h: float) -> float:
    """Bernoulli relative entropy D(a || h)."""
    out = 0.0
    if a > 0:
        out += a * math.log(a / h)
    if a < 1:
        out += (1 - a) * math.log((1 - a) / (1 - h))
    return out


@dataclass(frozen=True)
class BinomialWindow:
    """Index window ``[alpha n, beta n]`` kept from a Binomial(n, h) sum."""

    alpha: float
    beta: float
    h: float

    def __post_init__(self) -> None:
        if not (0 <= self.alpha < self.h < self.beta <= 1):
            raise WindowViolation(
                f"need 0 <= alpha < h < beta <= 1, got {self.alpha}, {self.h}, {self.beta}"
            )

    @classmethod
    def default(cls, h: float) -> "BinomialWindow":
        h = float(h)
        return cls(h / 2, (1 + h) / 2, h)

    @property
    def nu(self) -> float:
        """Per-step Chernoff rate: the tail is at most 2 nu^n."""
        rates = []
        if self.alpha > 0:
            rates.append(math.exp(-_kl(self.alpha, self.h)))
        if self.beta < 1:
            rates.append(math.exp(-_kl(self.beta, self.h)))
        return max(rates) if rates else 0.0

    def tail_bound(self, n: int, h: Optional[float] = None) -> float:
        """Chernoff bound on P(Binomial(n, h) outside the window)."""
        h = self.h if h is None else h
        bound = 0.0
        if self.alpha > 0:
            bound += math.exp(-n * _kl(self.alpha, h))
        if self.beta < 1:
            bound += math.exp(-n * _kl(self.beta, h))
        return min(bound, 1.0)

    def indices(self, n: int) -> range:
        lo = math.ceil(self.alpha * n - 1e-12)
        hi = math.floor(self.beta * n + 1e-12)
        return range(max(lo, 0), min(hi, n) + 1)


@dataclass
class JointReturnLaw:
    """Masses of ``(N1, N2)`` jointly with the conditioning event.

    Float tables are stored scaled: ``mass = table * exp(log_scale)``, which
    keeps exponentially rare events representable.
    """

    n: int
    walk: StepDistribution
    conditioning: Conditioning
    table: np.ndarray = field(repr=False)
    log_scale: float = 0.0
    truncation_remainder: float = 0.0
    backend: str = "exact"
    mode: str = "exact"

    @property
    def exact(self) -> bool:
        return self.backend == "exact"

    @property
    def shape(self) -> Tuple[int, int]:
        return self.table.shape

    def _scaled_total(self):
        total = sum(self.table.flat) if self.exact else float(self.table.sum())
        return total

    @property
    def event_probability(self) -> Number:
        total = self._scaled_total()
        if self.exact:
            return total
        return total * math.exp(self.log_scale)

    @property
    def log_event_probability(self) -> float:
        total = self._scaled_total()
        if total == 0:
            return -math.inf
        return math.log(total) + self.log_scale

    def masses(self) -> np.ndarray:
        if self.exact:
            return self.table
        return self.table * math.exp(self.log_scale)

    def conditional(self) -> np.ndarray:
        total = self._scaled_total()
        if total == 0:
            raise ZeroDivisionError("conditioning event has probability 0")
        if self.exact:
            return self.table / total
        return self.table / total

    def conditional_slack(self) -> float:
        """Bound on the error of each conditional cell due to truncation."""
        if not self.truncation_remainder:
            return 0.0
        lp = self.log_event_probability
        if lp == -math.inf:
            return math.inf
        return min(2 * self.truncation_remainder * math.exp(-lp), 1.0)

    def marginal(self, axis: int, conditional: bool = True) -> np.ndarray:
        t = self.conditional() if conditional else self.masses()
        return t.sum(axis=1) if axis == 1 else t.sum(axis=0)

    def cell(self, r1: int, r2: int) -> Number:
        if r1 >= self.table.shape[0] or r2 >= self.table.shape[1]:
            return 0
        return self.masses()[r1, r2]

    def rows(self, conditional: bool = False) -> Iterator[Tuple[int, int, Number]]:
        t = self.conditional() if conditional else self.masses()
        for (r1, r2), v in np.ndenumerate(t):
            if v:
                yield r1, r2, v

    def as_dict(self, conditional: bool = False) -> dict:
        return {(r1, r2): v for r1, r2, v in self.rows(conditional)}


def _exact_axis_arrays(n: int, p: Number, conditioning: Conditioning) -> list:
    flags = _FLAGS[conditioning]
    out = []
    for k, den, nums in oned.exact_slices(n, p):
        row = [0] * (k // 2 + 1)
        for f in flags:
            for r, v in enumerate(nums[f]):
                row[r] += v
        out.append([Fraction(int(v), den) for v in row])
    return out


def _pad(row: list, size: int) -> np.ndarray:
    arr = np.zeros(size, dtype=object)
    arr[:] = Fraction(0)
    arr[: len(row)] = row
    return arr


def _default_window(walk: StepDistribution, h_star: float) -> BinomialWindow:
    h1 = float(walk.h1)
    lo = min(h1, h_star)
    hi = max(h1, h_star)
    return BinomialWindow(lo / 2, (1 + hi) / 2, h1)


def joint_law(
    n: int,
    walk: StepDistribution,
    conditioning=Conditioning.UNCONDITIONED,
    mode: str = "exact",
    window: Optional[BinomialWindow] = None,
    backend: str = "auto",
) -> JointReturnLaw:
    """Exact joint law of the numbers of returns to the two axes.

    ``mode="exact"`` sums over every horizontal-step count; ``"windowed"``
    keeps only counts inside ``window`` and records a bound on the dropped
    mass in ``truncation_remainder``.
    """
    conditioning = Conditioning.parse(conditioning)
    check_conditioning(n, conditioning)
    if mode not in ("exact", "windowed"):
        raise ValueError(f"unknown mode {mode!r}")
    backend = resolve_backend(walk, n, backend)
    if backend == "exact":
        return _joint_exact(n, walk.as_exact(), conditioning, mode, window)
    return _joint_float(n, walk.as_float(), conditioning, mode, window)


def _joint_exact(n, walk, conditioning, mode, window) -> JointReturnLaw:
    p1, _, h1 = extracted_params(walk, 1)
    p2, _, h2 = extracted_params(walk, 2)
    a1 = _exact_axis_arrays(n, p1, conditioning)
    a2 = a1 if p2 == p1 else _exact_axis_arrays(n, p2, conditioning)
    R = n // 2 + 1
    ks = range(n + 1)
    remainder = 0.0
    if mode == "windowed":
        window = window or BinomialWindow.default(float(h1))
        ks = window.indices(n)
        remainder = window.tail_bound(n, float(h1))
    table = np.zeros((R, R), dtype=object)
    table[:, :] = Fraction(0)
    for k in ks:
        w = comb(n, k) * h1**k * h2 ** (n - k)
        table += w * np.outer(_pad(a1[k], R), _pad(a2[n - k], R))
    return JointReturnLaw(
        n, walk, conditioning, table, 0.0, remainder, "exact", mode
    )


def _joint_float(n, walk, conditioning, mode, window) -> JointReturnLaw:
    p1, _, h1 = extracted_params(walk, 1)
    p2, _, h2 = extracted_params(walk, 2)
    s1 = oned.float_slices(n, p1, conditioning)
    s2 = s1 if p2 == p1 else oned.float_slices(n, p2, conditioning)
    lam1 = math.exp(s1.log_rate)
    lam2 = math.exp(s2.log_rate)
    theta = lam1 * h1 + lam2 * h2
    h_star = lam1 * h1 / theta
    k = np.arange(n + 1)
    weights = stats.binom.pmf(k, n, h_star)
    remainder = 0.0
    if mode == "windowed":
        window = window or _default_window(walk, h_star)
        keep = np.zeros(n + 1, dtype=bool)
        keep[list(window.indices(n))] = True
        weights = np.where(keep, weights, 0.0)
        plain = window.tail_bound(n, float(h1))
        tilted = math.exp(
            n * math.log(theta)
            + math.log(max(window.tail_bound(n, h_star), 1e-300))
            + math.log(float(s1.scaled.max()) * float(s2.scaled.max()))
        )
        remainder = min(plain, tilted)
    # contiguous operands keep the product on the BLAS path
    left = np.ascontiguousarray(s1.scaled.T * weights)
    right = np.ascontiguousarray(s2.scaled[::-1])
    table = left @ right
    return JointReturnLaw(
        n, walk, conditioning, table, n * math.log(theta), remainder, "float", mode
    )


def exit_probability(n: int, walk: StepDistribution, backend: str = "auto") -> Number:
    """P(tau > n): the walk stays in the closed quadrant for n steps."""
    if n < 0:
        raise ValueError("n must be non-negative")
    backend = resolve_backend(walk, n, backend)
    if backend == "exact":
        walk = walk.as_exact()
        p1, _, h1 = extracted_params(walk, 1)
        p2, _, h2 = extracted_params(walk, 2)
        c1 = oned.exact_survival_curve(n, p1)
        c2 = oned.exact_survival_curve(n, p2)
        return sum(
            comb(n, k) * h1**k * h2 ** (n - k) * c1[k] * c2[n - k]
            for k in range(n + 1)
        )
    return math.exp(log_exit_probability(n, walk))


def log_exit_probability(n: int, walk: StepDistribution) -> float:
    walk = walk.as_float()
    p1, _, h1 = extracted_params(walk, 1)
    p2, _, _ = extracted_params(walk, 2)
    l1 = oned.float_survival_log(n, p1)
    l2 = oned.float_survival_log(n, p2)
    k = np.arange(n + 1)
    terms = stats.binom.logpmf(k, n, h1) + l1 + l2[::-1]
    top = terms.max()
    return float(top + math.log(np.exp(terms - top).sum()))


def bernstein_sum(
    f: Callable[[np.ndarray], np.ndarray],
    h: float,
    a: int,
    b: int,
    n: int,
    alpha: float = 0.0,
    beta: float = 1.0,
) -> float:
    """``sum f(k/n) C(n,k) h^k (1-h)^(n-k)`` over ``alpha n <= k <= beta n``,
    ``k = b (mod a)``; tends to ``f(h) / a``.
    """
    if a < 1 or b < 0:
        raise ValueError("need a >= 1 and b >= 0")
    if not (0 <= alpha < h < beta <= 1):
        raise WindowViolation(f"h={h} must lie strictly inside [{alpha}, {beta}]")
    k = np.arange(n + 1)
    inside = (k >= alpha * n) & (k <= beta * n) & (k >= b) & ((k - b) % a == 0)
    k = k[inside]
    if k.size == 0:
        return 0.0
    values = np.asarray(f(k / n), dtype=float) * np.ones(k.size)
    return float(np.sum(values * stats.binom.pmf(k, n, h)))
