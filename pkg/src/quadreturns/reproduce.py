"""Convergence checks behind the ``reproduce`` command.

Each target computes exact finite-n laws, measures their distance to the
limit law and compares it with a fixed threshold.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import limits
from .compare import independence_gap, ks_rescaled, tv_distance
from .limits import limit_joint
from .shuffle import joint_law
from .walk import Conditioning, Drift, Parity, StepDistribution, validate

SYMMETRIC = "1/4,1/4,1/4,1/4"
POSITIVE = "0.3,0.1,0.4,0.2"
MIXED = "0.1,0.3,0.4,0.2"
NEGATIVE = "0.1,0.3,0.2,0.4"

# (default, small) lengths
LENGTHS = {
    "halfnormal": (2000, 1000),
    "geometric": (400, 200),
    "rayleigh": (2000, 1000),
    "meander": (600, 200),
    "excursion": (400, 200),
}


@dataclass(frozen=True)
class Check:
    label: str
    n: int
    metric: str
    value: float
    threshold: float
    relation: str = "<="

    @property
    def passed(self) -> bool:
        if self.relation == "<=":
            return self.value <= self.threshold
        return self.value > self.threshold

    @property
    def margin(self) -> float:
        """How many times the threshold clears the measurement."""
        if self.relation == "<=":
            return math.inf if self.value == 0 else self.threshold / self.value
        return math.inf if self.threshold == 0 else self.value / self.threshold

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.label} n={self.n} {self.metric}={self.value:.6g} "
            f"{self.relation} {self.threshold:g}"
        )

    def as_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _n(key: str, scale: str) -> int:
    default, small = LENGTHS[key]
    if scale not in ("small", "default"):
        raise ValueError(f"unknown scale {scale!r}")
    return small if scale == "small" else default


def _walks(walks: Optional[Sequence], fallback: Sequence[str]) -> List[StepDistribution]:
    return [w if isinstance(w, StepDistribution) else validate(w) for w in (walks or fallback)]


def _marginal(n: int, walk: StepDistribution, cond, axis: int) -> np.ndarray:
    law = joint_law(n, walk, cond, backend="float")
    return np.asarray(law.marginal(axis), dtype=float)


def _axis_check(n: int, walk: StepDistribution, axis: int) -> Check:
    pmf = _marginal(n, walk, Conditioning.UNCONDITIONED, axis)
    label = f"unconditioned walk=({walk.spec_string()}) axis={axis}"
    if walk.drift(axis) is Drift.ZERO:
        scale = math.sqrt(float(walk.h(axis)) * n)
        return Check(label, n, "KS", ks_rescaled(pmf, scale, limits.halfnormal_cdf), 0.05)
    lim = limits.unconditioned_marginal(walk, axis)
    tv = tv_distance(pmf, lim.pmf_array(len(pmf) - 1), tail_b=lim.tail(len(pmf) - 1))
    return Check(label, n, "TV", tv, 0.05)


def unconditioned(scale: str = "default", walks=None) -> List[Check]:
    if walks:
        ws = _walks(walks, ())
        return [
            _axis_check(_n("halfnormal" if w.drift(1) is Drift.ZERO else "geometric", scale), w, 1)
            for w in ws
        ]
    return [
        _axis_check(_n("halfnormal", scale), validate(SYMMETRIC), 1),
        _axis_check(_n("geometric", scale), validate(POSITIVE), 1),
    ]


def bridge(scale: str = "default", walks=None) -> List[Check]:
    n = _n("rayleigh", scale)
    out = []
    for walk in _walks(walks, (SYMMETRIC,)):
        law = joint_law(n, walk, Conditioning.BRIDGE, backend="float")
        table = np.asarray(law.conditional(), dtype=float)
        tag = f"bridge walk=({walk.spec_string()})"
        for axis in (1, 2):
            pmf = table.sum(axis=1) if axis == 1 else table.sum(axis=0)
            s = math.sqrt(float(walk.h(axis)) * n)
            out.append(
                Check(f"{tag} axis={axis}", n, "KS", ks_rescaled(pmf, s, limits.rayleigh_cdf), 0.05)
            )
        out.append(Check(f"{tag} independence", n, "TV", independence_gap(table), 0.02))
    return out


def meander(scale: str = "default", walks=None) -> List[Check]:
    n = _n("meander", scale)
    out = []
    for walk in _walks(walks, (POSITIVE, MIXED, NEGATIVE)):
        law = joint_law(n, walk, Conditioning.MEANDER, backend="float")
        table = np.asarray(law.conditional(), dtype=float)
        lim = limit_joint(walk, Conditioning.MEANDER, Parity.of(n))
        ref, tail = lim.pmf_table(table.shape)
        tag = f"meander walk=({walk.spec_string()})"
        tv = tv_distance(table, ref, tail_b=tail) + law.conditional_slack()
        out.append(Check(tag, n, "TV", tv, 0.05))
        if lim.structure == "mixture_2d":
            big, _ = lim.pmf_table((80, 80))
            out.append(
                Check(f"{tag} limit dependence", n, "TV", independence_gap(big), 1e-3, ">")
            )
    return out


def excursion(scale: str = "default", walks=None) -> List[Check]:
    n = _n("excursion", scale)
    out = []
    for walk in _walks(walks, (SYMMETRIC, POSITIVE)):
        law = joint_law(n, walk, Conditioning.NONNEG_BRIDGE, backend="float")
        table = np.asarray(law.conditional(), dtype=float)
        ref, tail = limit_joint(walk, Conditioning.NONNEG_BRIDGE).pmf_table(table.shape)
        tv = tv_distance(table, ref, tail_b=tail)
        out.append(Check(f"excursion walk=({walk.spec_string()})", n, "TV", tv, 0.05))
    return out


TARGETS: Dict[str, Callable[..., List[Check]]] = {
    "1.1": unconditioned,
    "1.2": bridge,
    "1.3": meander,
    "1.4": excursion,
}


def run(target: str, scale: str = "default", walks=None) -> List[Check]:
    try:
        fn = TARGETS[target]
    except KeyError:
        raise ValueError(
            f"unknown target {target!r}; choose one of {', '.join(TARGETS)}"
        ) from None
    return fn(scale, walks)
