"""Exact finite-length laws of the returns to 0 of a simple walk on Z.

Two routes are provided:

* a forward dynamic programme over (position, returns so far, survival),
  exact in rational arithmetic (:func:`joint_table`, :func:`exact_slices`);
* a renewal route for long walks in floating point (:func:`float_slices`):
  the walk up to its last zero is a concatenation of excursions whose law is
  known in closed form, and the rest never comes back to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Iterator, List, Tuple

import numpy as np
from scipy.special import gammaln

from . import kernels
from .errors import CapacityExceeded, OutOfRange
from .walk import EXACT_MAX_N, Conditioning, Number

# (return count, S_k == 0, tau > k)
Cell = Tuple[int, bool, bool]

FLOAT_MAX_K = 200_000


@dataclass(frozen=True)
class OneDimTable:
    length: int
    p: Number
    masses: Dict[Cell, Number] = field(repr=False)

    def mass(self, r: int, z: bool, s: bool) -> Number:
        return self.masses.get((r, z, s), 0)

    def total(self) -> Number:
        return sum(self.masses.values())

    def marginal(self, z: bool | None = None, s: bool | None = None) -> list:
        """Masses over the return count, optionally restricted on the flags."""
        out = [0] * (self.length // 2 + 1)
        for (r, zz, ss), m in self.masses.items():
            if (z is None or zz == z) and (s is None or ss == s):
                out[r] += m
        return out


def _as_fraction(p: Number) -> Fraction:
    return p if isinstance(p, Fraction) else Fraction(repr(float(p)))


def exact_slices(n: int, p: Number) -> Iterator[Tuple[int, int, dict]]:
    """Yield ``(k, denominator, numerators)`` for every length ``k = 0..n``.

    ``numerators[(z, s)]`` is a list over the return count of integers; the
    probability of a cell is numerator / denominator (= b**k for p = a/b).
    """
    if n > EXACT_MAX_N:
        raise CapacityExceeded(f"rational DP is capped at n={EXACT_MAX_N}")
    frac = _as_fraction(p)
    a, b = frac.numerator, frac.denominator
    c = b - a
    R = n // 2 + 2
    # alive[x][r] for x >= 0, dead[x + n + 1][r] for any x
    off = n + 1
    alive = np.zeros((n + 2, R), dtype=object)
    dead = np.zeros((2 * n + 3, R), dtype=object)
    alive[0, 0] = 1

    def snapshot(k: int) -> dict:
        rr = k // 2 + 1
        return {
            (True, True): list(alive[0, :rr]),
            (True, False): list(dead[off, :rr]),
            (False, True): list(alive[1:, :rr].sum(axis=0)),
            (False, False): list(dead[:, :rr].sum(axis=0) - dead[off, :rr]),
        }

    yield 0, 1, snapshot(0)
    den = 1
    for k in range(1, n + 1):
        na = np.zeros_like(alive)
        nd = np.zeros_like(dead)
        na[1:, :] += a * alive[:-1, :]
        na[1:-1, :] += c * alive[2:, :]
        na[0, 1:] += c * alive[1, :-1]
        nd[off - 1, :] += c * alive[0, :]
        nd[1:, :] += a * dead[:-1, :]
        nd[:-1, :] += c * dead[1:, :]
        landed = nd[off, :].copy()
        nd[off, :] = 0
        nd[off, 1:] = landed[:-1]
        alive, dead = na, nd
        den *= b
        yield k, den, snapshot(k)


def joint_table(k: int, p: Number, backend: str = "auto") -> OneDimTable:
    """Joint law of (returns to 0, ``S_k == 0``, ``tau > k``) after ``k`` steps.

    ``backend="exact"`` (default for rational ``p``) runs the DP on integers;
    ``"float"`` uses the compiled dense DP.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    if backend == "auto":
        backend = "exact" if isinstance(p, Fraction) and k <= EXACT_MAX_N else "float"
    masses: Dict[Cell, Number] = {}
    if backend == "exact":
        for kk, den, nums in exact_slices(k, p):
            if kk != k:
                continue
            for (z, s), row in nums.items():
                for r, v in enumerate(row):
                    if v:
                        masses[(r, z, s)] = Fraction(int(v), den)
        return OneDimTable(k, p, masses)
    if k > FLOAT_MAX_K:
        raise CapacityExceeded(f"dense DP is capped at k={FLOAT_MAX_K}")
    arrays = kernels.dense_onedim(k, float(p))
    for (z, s), row in zip(
        ((True, True), (True, False), (False, True), (False, False)), arrays
    ):
        for r, v in enumerate(row):
            if v:
                masses[(r, z, s)] = float(v)
    return OneDimTable(k, float(p), masses)


def _check_theta_args(r: int, n: int) -> None:
    if n % 2 or n < 0:
        raise OutOfRange(f"theta_r=n needs an even non-negative n, got {n}")
    if r < 1:
        raise OutOfRange("r must be a positive integer")


def theta_pmf(r: int, n: int) -> Fraction:
    """P(r-th return to 0 happens at time n), symmetric walk."""
    _check_theta_args(r, n)
    if r > n // 2:
        return Fraction(0)
    return Fraction(r * comb(n - r, n // 2), (n - r) * 2 ** (n - r))


def theta_survival_pmf(r: int, n: int) -> Fraction:
    """P(r-th return at time n and the walk never went negative), symmetric walk."""
    return theta_pmf(r, n) / 2**r


def returns_pmf_closed_form(m: int, r: int) -> Fraction:
    """P(N_{2m} = r) for the symmetric walk."""
    if r < 0 or r > m:
        return Fraction(0)
    return Fraction(comb(2 * m - r, m), 2 ** (2 * m - r))


def survival(k: int, p: Number, backend: str = "auto") -> Number:
    """P(tau > k): the walk has not visited -1 during the first k steps."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if backend == "auto":
        backend = "exact" if isinstance(p, Fraction) else "float"
    if backend == "exact":
        return exact_survival_curve(k, p)[k]
    return math.exp(float(kernels.survival_log(k, float(p))[k]))


def exact_survival_curve(n: int, p: Number) -> List[Fraction]:
    """[P(tau > k) for k = 0..n] in rational arithmetic."""
    frac = _as_fraction(p)
    a, b = frac.numerator, frac.denominator
    c = b - a
    f = [1] + [0] * (n + 1)
    out = [Fraction(1)]
    den = 1
    for m in range(n):
        g = [0] * (n + 2)
        for x in range(m + 2):
            v = c * f[x + 1]
            if x:
                v += a * f[x - 1]
            g[x] = v
        f = g
        den *= b
        out.append(Fraction(sum(f), den))
    return out


# ---------------------------------------------------------------------------
# floating point renewal route


@dataclass(frozen=True)
class OneDimSlices:
    """Per-length masses ``A[k, r] = scaled[k, r] * exp(k * log_rate)``.

    ``kind`` names the event recorded alongside the return count: all paths,
    ``S_k = 0``, ``tau > k`` or both.
    """

    p: float
    kind: Conditioning
    scaled: np.ndarray
    log_rate: float

    @property
    def n(self) -> int:
        return self.scaled.shape[0] - 1

    def masses(self, k: int) -> np.ndarray:
        return self.scaled[k] * math.exp(k * self.log_rate)


def _log_first_returns(M: int, R: int) -> np.ndarray:
    """log P*(theta_r = 2m) for the symmetric walk, shape (M + 1, R)."""
    m = np.arange(M + 1, dtype=float)[:, None]
    r = np.arange(R, dtype=float)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        top = 2 * m - r
        out = (
            -top * math.log(2.0)
            + np.log(r)
            - np.log(top)
            + gammaln(top + 1)
            - gammaln(m + 1)
            - gammaln(m - r + 1)
        )
    valid = (r >= 1) & (r <= m)
    out = np.where(valid, out, -np.inf)
    out[0, 0] = 0.0
    return out


def _log_tails(n: int, p: float) -> Tuple[np.ndarray, np.ndarray]:
    """log of P(S_1..S_j > 0) and P(S_1..S_j != 0), j = 0..n."""
    q = 1.0 - p
    log_q_up = kernels.survival_log(max(n - 1, 0), p)
    pos = np.full(n + 1, -np.inf)
    pos[0] = 0.0
    if n >= 1:
        pos[1:] = math.log(p) + log_q_up[:n]
        log_q_down = kernels.survival_log(n - 1, q)
        neg = math.log(q) + log_q_down[:n]
        both = np.empty(n + 1)
        both[0] = 0.0
        both[1:] = np.logaddexp(pos[1:], neg)
    else:
        both = np.zeros(1)
    return pos, both


def float_slices(n: int, p: float, kind: Conditioning) -> OneDimSlices:
    """Masses over the return count for every length 0..n (renewal route).

    The walk decomposes at its last zero: ``P(N_k = r, E) = sum_j U_r(j) G(k-j)``
    where ``U_r(j)`` is the probability that the r-th return happens at time j
    (closed form, tilted from the symmetric walk) and ``G`` the probability of
    never returning in the remaining steps.
    """
    if n > FLOAT_MAX_K:
        raise CapacityExceeded(f"float engine is capped at n={FLOAT_MAX_K}")
    p = float(p)
    q = 1.0 - p
    kind = Conditioning.parse(kind)
    M = n // 2
    R = M + 1
    log_4pq = math.log(4 * p * q)
    if kind.pins_endpoint or (kind is Conditioning.MEANDER and p < q):
        log_rate = 0.5 * log_4pq
    else:
        log_rate = 0.0
    log_u = _log_first_returns(M, R)
    m = np.arange(M + 1, dtype=float)[:, None]
    # U_r(2m) / rate^(2m)
    log_u = log_u + m * (log_4pq - 2 * log_rate)
    if kind.needs_survival:
        log_u = log_u - np.arange(R)[None, :] * math.log(2.0)
    u = np.exp(log_u)
    if kind.pins_endpoint:
        scaled = np.zeros((n + 1, R))
        scaled[0::2, :] = u
        return OneDimSlices(p, kind, scaled, log_rate)
    pos, both = _log_tails(n, p)
    log_g = pos if kind is Conditioning.MEANDER else both
    g = np.exp(log_g - np.arange(n + 1) * log_rate)
    idx = np.arange(n + 1)[:, None] - 2 * np.arange(M + 1)[None, :]
    toeplitz = np.where(idx >= 0, g[np.clip(idx, 0, n)], 0.0)
    scaled = toeplitz @ u
    return OneDimSlices(p, kind, scaled, log_rate)


def float_survival_log(n: int, p: float) -> np.ndarray:
    """log P(tau > k) for k = 0..n."""
    return kernels.survival_log(n, float(p))
