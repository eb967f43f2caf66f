"""Distances between finite-n return laws and their limits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from .limits import LimitLaw, limit_joint, rescale_factor
from .shuffle import JointReturnLaw, joint_law
from .walk import Conditioning, Parity, StepDistribution, check_conditioning

Law = Union[np.ndarray, Mapping, List[float]]


def _as_dict(law: Law) -> Dict:
    if isinstance(law, Mapping):
        return dict(law)
    arr = np.asarray(law, dtype=float)
    return {idx: float(v) for idx, v in np.ndenumerate(arr) if v}


def tv_distance(a: Law, b: Law, tail_a: float = 0.0, tail_b: float = 0.0) -> float:
    """Half the L1 distance over the union of supports.

    ``tail_a``/``tail_b`` bound mass missing from truncated laws; half of each
    is added so the result stays an upper bound.
    """
    da, db = _as_dict(a), _as_dict(b)
    keys = sorted(set(da) | set(db))
    diff = math.fsum(abs(float(da.get(k, 0.0)) - float(db.get(k, 0.0))) for k in keys)
    return min(0.5 * diff + 0.5 * (tail_a + tail_b), 1.0)


def ks_rescaled(counts: Law, scale: float, limit_cdf) -> float:
    """``sup_r |P(N <= r) - F(r / scale)|`` over the jump points r of the law."""
    if not scale > 0:
        raise ValueError("scale must be positive")
    pmf = np.asarray(counts, dtype=float)
    cdf = np.cumsum(pmf)
    return max(
        (abs(cdf[r] - limit_cdf(r / scale)) for r in range(len(pmf)) if pmf[r] > 0),
        default=0.0,
    )


def ks_2d(table: np.ndarray, limit: LimitLaw, scales: Tuple[float, float]) -> float:
    """Kolmogorov distance between a joint law on counts and a joint limit cdf,
    taken over the grid of jump points."""
    cdf = np.cumsum(np.cumsum(np.asarray(table, dtype=float), axis=0), axis=1)
    s1, s2 = scales
    rows = np.nonzero(table.sum(axis=1))[0]
    cols = np.nonzero(table.sum(axis=0))[0]
    f1 = np.array([limit.marginals[0].cdf(r / s1) for r in rows])
    f2 = np.array([limit.marginals[1].cdf(r / s2) for r in cols])
    if limit.structure == "mixture_2d":
        grid = np.array([[limit.cdf(r1 / s1, r2 / s2) for r2 in cols] for r1 in rows])
    else:
        grid = np.outer(f1, f2)
    return float(np.max(np.abs(cdf[np.ix_(rows, cols)] - grid)))


def independence_gap(table: np.ndarray) -> float:
    """TV between a joint law and the product of its own marginals."""
    t = np.asarray(table, dtype=float)
    t = t / t.sum()
    return tv_distance(t, np.outer(t.sum(axis=1), t.sum(axis=0)))


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    parity: Parity
    metric: str
    value: float
    slack: float
    conditioning: Conditioning
    scales: Tuple[float, float]


def compare_law(
    law: JointReturnLaw, limit: Optional[LimitLaw] = None
) -> ConvergenceRow:
    """Distance between a computed finite-n law and its limit.

    Discrete limits use TV on the joint law (the limit's truncated tail and
    the law's truncation slack are both reported); continuous ones use the
    Kolmogorov distance of the rescaled joint cdf.
    """
    n, walk, cond = law.n, law.walk, law.conditioning
    parity = Parity.of(n)
    if limit is None:
        limit = limit_joint(walk, cond, parity)
    table = np.asarray(law.conditional(), dtype=float)
    slack = law.conditional_slack()
    scales = (
        rescale_factor(walk, cond, 1, n) if limit.marginals[0].continuous else 1.0,
        rescale_factor(walk, cond, 2, n) if limit.marginals[1].continuous else 1.0,
    )
    if limit.discrete:
        lim, tail = limit.pmf_table(table.shape)
        value = tv_distance(table, lim, tail_b=tail)
        return ConvergenceRow(n, parity, "TV", value, slack, cond, scales)
    value = ks_2d(table, limit, scales)
    return ConvergenceRow(n, parity, "KS", value, slack, cond, scales)


def sweep(
    ns: Iterable[int],
    walk: StepDistribution,
    conditioning=Conditioning.UNCONDITIONED,
    backend: str = "auto",
    mode: str = "exact",
) -> List[ConvergenceRow]:
    ns = list(ns)
    if any(b < a for a, b in zip(ns, ns[1:])):
        raise ValueError("ns must be sorted ascending")
    conditioning = Conditioning.parse(conditioning)
    for n in ns:
        check_conditioning(n, conditioning)
    return [
        compare_law(joint_law(n, walk, conditioning, mode=mode, backend=backend))
        for n in ns
    ]
