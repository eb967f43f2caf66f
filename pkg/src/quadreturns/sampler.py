"""Seeded Monte Carlo estimates of the joint return law.

Every trial draws its steps from its own Philox stream keyed by the seed and
counted by the trial index, so the set of simulated paths does not depend on
how trials are split into blocks or spread over threads. Blocks are reduced to
integer histograms over ``(r1, r2, x, y)`` and merged, which keeps the result
byte-identical for any number of lanes.
"""

from __future__ import annotations

import math
import os
import warnings
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from . import kernels
from .errors import BudgetExhausted
from .limits import KAPPA, tau_asymptote
from .walk import Conditioning, StepDistribution, check_conditioning

BLOCK = 1 << 16
THREADS_ENV = "QUADRETURNS_THREADS"
REFUSE_BELOW = 1e-8

Key = Tuple[int, int, int, int]


def default_lanes() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    lanes = int(raw)
    if lanes < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer")
    return lanes


def symmetrized(walk: StepDistribution) -> Tuple[StepDistribution, float]:
    """Driftless walk with the same per-axis geometry and the normaliser L."""
    w = walk.as_float()
    s1 = math.sqrt(w.p1 * w.q1)
    s2 = math.sqrt(w.p2 * w.q2)
    big_l = 2 * s1 + 2 * s2
    return StepDistribution(s1 / big_l, s1 / big_l, s2 / big_l, s2 / big_l), big_l


def _thresholds(walk: StepDistribution) -> Tuple[float, float, float]:
    w = walk.as_float()
    return w.p1, w.p1 + w.q1, w.p1 + w.q1 + w.p2


def _keep(conditioning: Conditioning, xs, ys, alive) -> np.ndarray:
    keep = np.ones(xs.shape[0], dtype=bool)
    if conditioning.pins_endpoint:
        keep &= (xs == 0) & (ys == 0)
    if conditioning.needs_survival:
        keep &= alive
    return keep


def _run_block(args) -> Counter:
    seed, start, count, n, thresholds, conditioning = args
    r1, r2, xs, ys, alive = kernels.simulate_block(seed, start, count, n, *thresholds)
    keep = _keep(conditioning, xs, ys, alive)
    rows = np.stack([r1[keep], r2[keep], xs[keep], ys[keep]], axis=1)
    out: Counter = Counter()
    if rows.shape[0]:
        uniq, counts = np.unique(rows, axis=0, return_counts=True)
        for row, c in zip(uniq.tolist(), counts.tolist()):
            out[tuple(row)] += c
    return out


@dataclass
class EmpiricalLaw:
    """Histogram of accepted trials over ``(r1, r2, x, y)``.

    ``weights`` maps an endpoint ``(x, y)`` to the likelihood ratio of the
    simulated walk against the target walk (all ones for plain rejection).
    """

    n: int
    walk: StepDistribution
    conditioning: Conditioning
    seed: int
    trials: int
    method: str
    lanes: int
    histogram: Dict[Key, int] = field(repr=False)
    weight_log_base: float = 0.0
    weight_log_x: float = 0.0
    weight_log_y: float = 0.0

    @property
    def accepted(self) -> int:
        return sum(self.histogram.values())

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.trials

    @property
    def empty(self) -> bool:
        return self.accepted == 0

    def _weight(self, x: int, y: int) -> float:
        return math.exp(
            self.weight_log_base + x * self.weight_log_x + y * self.weight_log_y
        )

    def estimate(self, event: Callable[[Key], bool]) -> Tuple[float, float]:
        """Unbiased estimate of P(event and conditioning) with its standard error."""
        s = s2 = 0.0
        for key in sorted(self.histogram):
            if event(key):
                w = self._weight(key[2], key[3])
                c = self.histogram[key]
                s += c * w
                s2 += c * w * w
        mean = s / self.trials
        var = max(s2 / self.trials - mean * mean, 0.0)
        return mean, math.sqrt(var / self.trials)

    @property
    def event_probability(self) -> float:
        return self.estimate(lambda key: True)[0]

    def cells(self) -> Dict[Tuple[int, int], float]:
        """Normalised (self-normalised when weighted) law of ``(r1, r2)``."""
        acc: Dict[Tuple[int, int], float] = {}
        for key in sorted(self.histogram):
            w = self.histogram[key] * self._weight(key[2], key[3])
            acc[key[:2]] = acc.get(key[:2], 0.0) + w
        total = sum(acc.values())
        if total == 0:
            return {}
        return {k: v / total for k, v in acc.items()}

    def table(self, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
        cells = self.cells()
        if shape is None:
            r = self.n // 2 + 1
            shape = (r, r)
        out = np.zeros(shape)
        for (r1, r2), v in cells.items():
            out[r1, r2] = v
        return out


def sample(
    n: int,
    walk: StepDistribution,
    conditioning=Conditioning.UNCONDITIONED,
    seed: int = 0,
    trials: int = 100_000,
    method: str = "rejection",
    lanes: Optional[int] = None,
) -> EmpiricalLaw:
    """Simulate ``trials`` walks of length ``n`` and keep those in the event.

    ``method="tilted"`` simulates the driftless walk with the same per-axis
    rates and reweights each kept path by its likelihood ratio, which only
    depends on the endpoint.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if n < 0:
        raise ValueError("n must be non-negative")
    if method not in ("rejection", "tilted"):
        raise ValueError(f"unknown method {method!r}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in 64 bits")
    conditioning = Conditioning.parse(conditioning)
    check_conditioning(n, conditioning)
    lanes = default_lanes() if lanes is None else lanes
    if lanes < 1:
        raise ValueError("lanes must be positive")

    walk_f = walk.as_float()
    base = lx = ly = 0.0
    sim = walk_f
    if method == "tilted":
        sim, big_l = symmetrized(walk_f)
        base = n * math.log(big_l)
        lx = 0.5 * math.log(walk_f.p1 / walk_f.q1)
        ly = 0.5 * math.log(walk_f.p2 / walk_f.q2)
    thresholds = _thresholds(sim)

    jobs = [
        (seed, start, min(BLOCK, trials - start), n, thresholds, conditioning)
        for start in range(0, trials, BLOCK)
    ]
    if lanes == 1:
        parts = [_run_block(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=lanes) as pool:
            parts = list(pool.map(_run_block, jobs))
    total: Counter = Counter()
    for part in parts:
        total.update(part)
    histogram = {k: total[k] for k in sorted(total)}

    law = EmpiricalLaw(
        n, walk, conditioning, seed, trials, method, lanes, histogram, base, lx, ly
    )
    if law.empty:
        warnings.warn(
            BudgetExhausted(
                f"no trial out of {trials} satisfied the {conditioning.value} conditioning"
            ),
            stacklevel=2,
        )
    return law


def acceptance_forecast(
    n: int, walk: StepDistribution, conditioning=Conditioning.UNCONDITIONED
) -> float:
    """Order-of-magnitude guess of the probability a trial is kept."""
    conditioning = Conditioning.parse(conditioning)
    if n == 0 or conditioning is Conditioning.UNCONDITIONED:
        return 1.0
    if conditioning is Conditioning.MEANDER:
        return min(tau_asymptote(walk, n), 1.0)
    sym, big_l = symmetrized(walk)
    h1, h2 = sym.h1, sym.h2
    if conditioning is Conditioning.BRIDGE:
        poly = KAPPA**2 / (2 * n * math.sqrt(h1 * h2))
    else:
        poly = 2 * KAPPA**2 / (n**3 * (h1 * h2) ** 1.5)
    return min(math.exp(n * math.log(big_l)) * poly, 1.0)
