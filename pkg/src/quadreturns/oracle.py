"""Brute-force 2D dynamic programme over (x, y, r1, r2, alive).

Independent of the shuffle decomposition; used to certify it at small n.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import CapTooLarge
from .shuffle import JointReturnLaw
from .walk import Conditioning, StepDistribution, check_conditioning

ORACLE_MAX_N = 14


def enumerate_joint(
    n: int,
    walk: StepDistribution,
    conditioning=Conditioning.UNCONDITIONED,
    region: str = "quadrant",
) -> JointReturnLaw:
    """Exact rational joint law of (N1, N2) with the conditioning event.

    ``region="half_plane"`` tracks only exits through ``x < 0`` (used to check
    the 1D reduction); the default tracks exits from the quadrant.
    """
    if n > ORACLE_MAX_N:
        raise CapTooLarge(f"oracle is capped at n={ORACLE_MAX_N}, got n={n}")
    if region not in ("quadrant", "half_plane"):
        raise ValueError(f"unknown region {region!r}")
    conditioning = Conditioning.parse(conditioning)
    check_conditioning(n, conditioning)
    walk = walk.as_exact()
    den = lcm(*(v.denominator for v in walk.probabilities))
    w = [int(v * den) for v in walk.probabilities]
    moves = ((1, 0, w[0]), (-1, 0, w[1]), (0, 1, w[2]), (0, -1, w[3]))
    track_y = region == "quadrant"

    states = {(0, 0, 0, 0, True): 1}
    for _ in range(n):
        nxt = defaultdict(int)
        for (x, y, r1, r2, alive), m in states.items():
            for dx, dy, wt in moves:
                nx, ny = x + dx, y + dy
                a = r1 + (1 if dx and nx == 0 else 0)
                b = r2 + (1 if dy and ny == 0 else 0)
                still = alive and nx >= 0 and (ny >= 0 or not track_y)
                nxt[(nx, ny, a, b, still)] += m * wt
        states = nxt

    R = n // 2 + 1
    table = np.zeros((R, R), dtype=object)
    table[:, :] = Fraction(0)
    total_den = den**n
    acc = defaultdict(int)
    for (x, y, r1, r2, alive), m in states.items():
        if conditioning.pins_endpoint and (x or y):
            continue
        if conditioning.needs_survival and not alive:
            continue
        acc[(r1, r2)] += m
    for (r1, r2), m in acc.items():
        table[r1, r2] = Fraction(m, total_den)
    return JointReturnLaw(n, walk, conditioning, table, 0.0, 0.0, "exact", "exact")
