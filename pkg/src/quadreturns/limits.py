"""Limit laws of the return counts and the asymptotic constants behind them.

Continuous limits (half-normal, Rayleigh) are exposed through their cdf and
apply to counts rescaled by ``sqrt(h_i n)``; discrete limits through a pmf
truncated where the remaining tail mass is below ``TAIL_EPS``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import special

from .errors import NegativeArgument, ZeroUnsupported
from .walk import Conditioning, Drift, Parity, StepDistribution, extracted_params

KAPPA = math.sqrt(2.0 / math.pi)
TAIL_EPS = 1e-13


def halfnormal_cdf(x: float) -> float:
    if x < 0:
        raise NegativeArgument(f"half-normal cdf needs x >= 0, got {x}")
    if math.isinf(x):
        return 1.0
    return math.erf(x / math.sqrt(2.0))


def rayleigh_cdf(x: float) -> float:
    if x < 0:
        raise NegativeArgument(f"Rayleigh cdf needs x >= 0, got {x}")
    if math.isinf(x):
        return 1.0
    return -math.expm1(-0.5 * x * x)


def geometric_pmf(alpha: float, r: int) -> float:
    """alpha (1 - alpha)^r on r = 0, 1, ..."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if r < 0:
        return 0.0
    if alpha == 1:
        return 1.0 if r == 0 else 0.0
    return alpha * (1 - alpha) ** r


def negbin_pmf(r: int) -> float:
    """r / 2^(r+1) on r = 1, 2, ..."""
    if r == 0:
        raise ZeroUnsupported("the negative binomial NB(2, 1/2) lives on r >= 1")
    if r < 0:
        return 0.0
    return math.ldexp(r, -(r + 1))


def meander_1d_pmf(p: float, parity: Union[Parity, str, int], r: int) -> float:
    """Limit law of the returns of a 1D walk conditioned to stay >= 0.

    Geometric(p) when p >= q; otherwise a parity-dependent law
    ``(a + (1 - a) r) / 2^(r+1)`` with ``a = 2p`` (even) or ``1/(2q)`` (odd).
    """
    p = float(p)
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    if r < 0:
        return 0.0
    q = 1.0 - p
    if p >= q:
        return p * q**r
    a = 2 * p if Parity.parse(parity) is Parity.EVEN else 1 / (2 * q)
    return math.ldexp(a + (1 - a) * r, -(r + 1))


# ---------------------------------------------------------------------------
# marginal descriptors


@dataclass(frozen=True)
class HalfNormal:
    scale: float = 1.0
    continuous = True

    def cdf(self, x: float) -> float:
        return halfnormal_cdf(x / self.scale)


@dataclass(frozen=True)
class Rayleigh:
    scale: float = 1.0
    continuous = True

    def cdf(self, x: float) -> float:
        return rayleigh_cdf(x / self.scale)


class _Discrete:
    continuous = False

    def pmf(self, r: int) -> float:
        raise NotImplementedError

    def tail(self, rmax: int) -> float:
        """Mass strictly above ``rmax``."""
        raise NotImplementedError

    def support_max(self, eps: float = TAIL_EPS) -> int:
        r = 0
        while self.tail(r) > eps:
            r += 1
        return r

    def pmf_array(self, rmax: Optional[int] = None) -> np.ndarray:
        rmax = self.support_max() if rmax is None else rmax
        return np.array([self.pmf(r) for r in range(rmax + 1)])

    def cdf(self, x: float) -> float:
        if x < 0:
            return 0.0
        return 1.0 - self.tail(int(math.floor(x)))


@dataclass(frozen=True)
class Geometric(_Discrete):
    alpha: float

    def pmf(self, r: int) -> float:
        return geometric_pmf(self.alpha, r)

    def tail(self, rmax: int) -> float:
        return (1 - self.alpha) ** (rmax + 1)


@dataclass(frozen=True)
class NegBinomial2Half(_Discrete):
    def pmf(self, r: int) -> float:
        return 0.0 if r == 0 else negbin_pmf(r)

    def tail(self, rmax: int) -> float:
        return math.ldexp(rmax + 2, -(rmax + 1))


@dataclass(frozen=True)
class LinearGeometric(_Discrete):
    """``(a + (1 - a) r) / 2^(r+1)``; the 1D negative-drift meander shape."""

    a: float

    def pmf(self, r: int) -> float:
        return math.ldexp(self.a + (1 - self.a) * r, -(r + 1)) if r >= 0 else 0.0

    def tail(self, rmax: int) -> float:
        return math.ldexp(self.a + (1 - self.a) * (rmax + 2), -(rmax + 1))


@dataclass(frozen=True)
class MeanderMixture1D(_Discrete):
    p: float
    parity: Parity = Parity.EVEN

    def _shape(self) -> _Discrete:
        q = 1 - self.p
        if self.p >= q:
            return Geometric(self.p)
        a = 2 * self.p if self.parity is Parity.EVEN else 1 / (2 * q)
        return LinearGeometric(a)

    def pmf(self, r: int) -> float:
        return self._shape().pmf(r)

    def tail(self, rmax: int) -> float:
        return self._shape().tail(rmax)


@dataclass(frozen=True)
class Mixture1D(_Discrete):
    """Convex combination of discrete laws."""

    weights: Tuple[float, ...]
    components: Tuple[_Discrete, ...]

    def pmf(self, r: int) -> float:
        return sum(w * c.pmf(r) for w, c in zip(self.weights, self.components))

    def tail(self, rmax: int) -> float:
        return sum(w * c.tail(rmax) for w, c in zip(self.weights, self.components))


# ---------------------------------------------------------------------------
# constants


@dataclass(frozen=True)
class AxisConstants:
    """Exit-time asymptotics ``P(tau_i > k) ~ c_i(k mod 2) rho_i^k / k^alpha_i``
    of the extracted walk and the meander return law ``phi_i(parity, r)``."""

    drift: Drift
    p: float
    q: float
    h: float
    rho: float
    alpha: float
    c: Tuple[float, float]
    phi: Tuple[_Discrete, _Discrete]

    @property
    def a(self) -> float:
        return 2 * self.p

    @property
    def b(self) -> float:
        return 1 / (2 * self.q)


def axis_constants(walk: StepDistribution, axis: int) -> AxisConstants:
    p, q, h = (float(v) for v in extracted_params(walk, axis))
    drift = walk.drift(axis)
    if drift is Drift.NEGATIVE:
        rho = math.sqrt(4 * p * q)
        # P(tau = k) = rho^k sqrt(q/p) P*(tau = k) for odd k.
        c0 = KAPPA * math.sqrt(q / p) * rho / (1 - rho * rho)
        c = (c0, rho * c0)
        phi = (LinearGeometric(2 * p), LinearGeometric(1 / (2 * q)))
        return AxisConstants(drift, p, q, h, rho, 1.5, c, phi)
    geo = Geometric(p)
    if drift is Drift.ZERO:
        return AxisConstants(drift, p, q, h, 1.0, 0.5, (KAPPA, KAPPA), (geo, geo))
    c0 = (p - q) / p
    return AxisConstants(drift, p, q, h, 1.0, 0.0, (c0, c0), (geo, geo))


@dataclass(frozen=True)
class LimitConstants:
    kappa: float
    axes: Tuple[AxisConstants, AxisConstants]
    theta: float

    @property
    def rho(self) -> Tuple[float, float]:
        return (self.axes[0].rho, self.axes[1].rho)

    def weight_point(self) -> float:
        """Where the tilted horizontal-step fraction concentrates."""
        a1 = self.axes[0]
        return a1.rho * a1.h / self.theta


def limit_constants(walk: StepDistribution) -> LimitConstants:
    ax = (axis_constants(walk, 1), axis_constants(walk, 2))
    # rho_i is already relative to the extracted walk, so weight by h_i
    theta = ax[0].rho * ax[0].h + ax[1].rho * ax[1].h
    return LimitConstants(KAPPA, ax, theta)


# ---------------------------------------------------------------------------
# joint limit laws


@dataclass(frozen=True)
class LimitLaw:
    """Limit of ``(N1 / a1_n, N2 / a2_n)``.

    ``structure`` is ``"product_of_marginals"`` (``marginals`` holds the two
    laws) or ``"mixture_2d"`` (``components`` holds ``(weight, law1, law2)``
    product terms).
    """

    structure: str
    marginals: Tuple[object, object]
    components: Tuple[Tuple[float, _Discrete, _Discrete], ...] = ()
    parity: Optional[Parity] = None

    @property
    def discrete(self) -> bool:
        return not any(getattr(m, "continuous", False) for m in self.marginals)

    def pmf(self, r1: int, r2: int) -> float:
        if not self.discrete:
            raise TypeError("continuous limit law has no pmf")
        if self.structure == "mixture_2d":
            return sum(w * a.pmf(r1) * b.pmf(r2) for w, a, b in self.components)
        return self.marginals[0].pmf(r1) * self.marginals[1].pmf(r2)

    def support_max(self, eps: float = TAIL_EPS) -> Tuple[int, int]:
        return (self.marginals[0].support_max(eps), self.marginals[1].support_max(eps))

    def pmf_table(self, shape: Optional[Tuple[int, int]] = None) -> Tuple[np.ndarray, float]:
        """``(table, tail)``: pmf on ``[0, R1) x [0, R2)`` and the mass left out."""
        if not self.discrete:
            raise TypeError("continuous limit law has no pmf")
        if shape is None:
            m1, m2 = self.support_max()
            shape = (m1 + 1, m2 + 1)
        R1, R2 = shape
        if self.structure == "mixture_2d":
            table = np.zeros(shape)
            tail = 0.0
            for w, a, b in self.components:
                table += w * np.outer(a.pmf_array(R1 - 1), b.pmf_array(R2 - 1))
                tail += w * (a.tail(R1 - 1) + b.tail(R2 - 1))
        else:
            a, b = self.marginals
            table = np.outer(a.pmf_array(R1 - 1), b.pmf_array(R2 - 1))
            tail = a.tail(R1 - 1) + b.tail(R2 - 1)
        return table, min(tail, 1.0)

    def cdf(self, x1: float, x2: float) -> float:
        """Joint cdf; for discrete axes the argument is the count itself."""
        if self.structure == "mixture_2d":
            return sum(w * a.cdf(x1) * b.cdf(x2) for w, a, b in self.components)
        return self.marginals[0].cdf(x1) * self.marginals[1].cdf(x2)


def unconditioned_marginal(walk: StepDistribution, axis: int):
    p, q = (float(v) for v in walk.pq(axis))
    if walk.drift(axis) is Drift.ZERO:
        return HalfNormal()
    return Geometric(abs(p - q) / (p + q))


def rescale_factor(walk: StepDistribution, conditioning: Conditioning, axis: int, n: int) -> float:
    """Divisor applied to the count of returns to axis ``axis`` before comparing."""
    conditioning = Conditioning.parse(conditioning)
    h = float(walk.h(axis))
    if conditioning is Conditioning.BRIDGE:
        return math.sqrt(h * n)
    if conditioning is Conditioning.UNCONDITIONED and walk.drift(axis) is Drift.ZERO:
        return math.sqrt(h * n)
    return 1.0


def _meander_law(walk: StepDistribution, parity: Parity) -> LimitLaw:
    a1, a2 = axis_constants(walk, 1), axis_constants(walk, 2)
    e = parity.bit
    # even n: both extracted lengths share a parity; odd n: they differ
    pairs = ((0, e), (1, 1 - e))
    raw = [(a1.c[i] * a2.c[j], a1.phi[i], a2.phi[j]) for i, j in pairs]
    total = sum(w for w, _, _ in raw)
    comps = tuple((w / total, f1, f2) for w, f1, f2 in raw)
    neg = [a.drift is Drift.NEGATIVE for a in (a1, a2)]
    m1 = Mixture1D(tuple(w for w, _, _ in comps), tuple(f for _, f, _ in comps))
    m2 = Mixture1D(tuple(w for w, _, _ in comps), tuple(f for _, _, f in comps))
    if all(neg):
        return LimitLaw("mixture_2d", (m1, m2), comps, parity)
    return LimitLaw("product_of_marginals", (m1, m2), comps, parity)


def limit_joint(
    walk: StepDistribution,
    conditioning=Conditioning.UNCONDITIONED,
    parity: Union[Parity, str, int, None] = None,
) -> LimitLaw:
    """Limit law of the (rescaled) pair of return counts."""
    conditioning = Conditioning.parse(conditioning)
    parity = Parity.EVEN if parity is None else Parity.parse(parity)
    if conditioning is Conditioning.UNCONDITIONED:
        return LimitLaw(
            "product_of_marginals",
            (unconditioned_marginal(walk, 1), unconditioned_marginal(walk, 2)),
        )
    if conditioning is Conditioning.BRIDGE:
        return LimitLaw("product_of_marginals", (Rayleigh(), Rayleigh()))
    if conditioning is Conditioning.NONNEG_BRIDGE:
        return LimitLaw("product_of_marginals", (NegBinomial2Half(), NegBinomial2Half()))
    return _meander_law(walk, parity)


def tau_asymptote(walk: StepDistribution, n: int, parity=None) -> float:
    """Leading-order approximation of P(tau > n) for the 2D walk."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.exp(log_tau_asymptote(walk, n, parity))


def log_tau_asymptote(walk: StepDistribution, n: int, parity=None) -> float:
    parity = Parity.of(n) if parity is None else Parity.parse(parity)
    lc = limit_constants(walk)
    a1, a2 = lc.axes
    if parity is Parity.EVEN:
        combo = a1.c[0] * a2.c[0] + a1.c[1] * a2.c[1]
    else:
        combo = a1.c[0] * a2.c[1] + a1.c[1] * a2.c[0]
    x = lc.weight_point()
    f = x ** (-a1.alpha) * (1 - x) ** (-a2.alpha)
    return (
        n * math.log(lc.theta)
        - (a1.alpha + a2.alpha) * math.log(n)
        + math.log(combo / 2)
        + math.log(f)
    )


def convolution_asymptotics_check(
    alpha_exp: float, a: float, b: float, n: int
) -> Tuple[float, float]:
    """``(sum_k a_k b_(n-k), (A b + a B) / n^alpha)`` for
    ``a_k = a / (k+1)^alpha`` and ``b_k = b / (k+1)^alpha``."""
    if not alpha_exp > 1:
        raise ValueError("alpha_exp must exceed 1")
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    k = np.arange(n + 1, dtype=float)
    seq = (k + 1) ** -alpha_exp
    lhs = float(a * b * np.sum(seq * seq[::-1]))
    zeta = float(special.zeta(alpha_exp, 1))
    rhs = (a * zeta * b + a * b * zeta) / n**alpha_exp
    return lhs, rhs
