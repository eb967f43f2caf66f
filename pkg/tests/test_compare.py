from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadreturns import limits
from quadreturns.compare import (
    compare_law,
    independence_gap,
    ks_rescaled,
    sweep,
    tv_distance,
)
from quadreturns.limits import limit_joint
from quadreturns.shuffle import joint_law
from quadreturns.walk import validate


def test_tv_basics():
    assert tv_distance({0: 0.5, 1: 0.5}, {1: 0.5, 0: 0.5}) == 0
    assert tv_distance({0: 1.0}, {1: 1.0}) == 1
    assert tv_distance([0.5, 0.5], [0.5, 0.5], tail_a=0.02) == pytest.approx(0.01)


def test_tv_geometric_vs_negbin():
    # direct rational summation over r < 200; both tails are below 2^-190
    want = sum(abs(F(1, 2 ** (r + 1)) - F(r, 2 ** (r + 1))) for r in range(200)) / 2
    g = limits.Geometric(0.5).pmf_array(199)
    nb = limits.NegBinomial2Half().pmf_array(199)
    assert tv_distance(g, nb) == pytest.approx(float(want), abs=1e-15)
    assert float(want) == pytest.approx(0.5, abs=1e-15)


law_st = st.lists(st.floats(0, 1), min_size=5, max_size=5).filter(lambda v: sum(v) > 0).map(
    lambda v: [x / sum(v) for x in v]
)


@settings(max_examples=100)
@given(law_st, law_st, law_st)
def test_tv_symmetry_and_triangle(a, b, c):
    assert tv_distance(a, b) == pytest.approx(tv_distance(b, a), abs=1e-12)
    assert tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12
    assert 0 <= tv_distance(a, b) <= 1


def test_ks_conventions():
    with pytest.raises(ValueError):
        ks_rescaled([1.0], 0, limits.halfnormal_cdf)
    # point mass at 0 vs half-normal: the cdf gap at the only jump is 1
    assert ks_rescaled([1.0], 1.0, limits.halfnormal_cdf) == 1
    # a fine discretisation of the half-normal is close to it
    s = 200.0
    edges = np.arange(0, 2000) / s
    cdf = np.array([limits.halfnormal_cdf(x) for x in edges])
    pmf = np.diff(np.concatenate([[0.0], cdf]))
    assert ks_rescaled(pmf, s, limits.halfnormal_cdf) < 1e-9


def test_symmetric_rescaled_marginals():
    w = validate("1/4,1/4,1/4,1/4")
    for cond, cdf in (("none", limits.halfnormal_cdf), ("bridge", limits.rayleigh_cdf)):
        law = joint_law(2000, w, cond, backend="float")
        m = law.marginal(1)
        assert ks_rescaled(m, (0.5 * 2000) ** 0.5, cdf) <= 0.05


def test_independence_detector():
    mix = limit_joint(validate("0.1,0.3,0.2,0.4"), "meander", "even").pmf_table((80, 80))[0]
    prod = limit_joint(validate("1/4,1/4,1/4,1/4"), "nnb").pmf_table((80, 80))[0]
    assert independence_gap(mix) > 1e-3
    assert independence_gap(prod) < 1e-12


def test_sweep_rows():
    assert sweep([], validate("1/4,1/4,1/4,1/4"), "nnb") == []
    rows = sweep([100, 400, 1600], validate("1/4,1/4,1/4,1/4"), "nnb")
    assert [r.metric for r in rows] == ["TV"] * 3
    assert rows[-1].value <= 0.05
    rows = sweep([200, 600], validate("0.1,0.3,0.2,0.4"), "meander")
    assert rows[-1].value <= 0.05
    with pytest.raises(ValueError):
        sweep([400, 100], validate("1/4,1/4,1/4,1/4"), "nnb")
    with pytest.raises(ValueError):
        sweep([101], validate("1/4,1/4,1/4,1/4"), "bridge")


def test_continuous_rows_use_rescaled_ks():
    row = compare_law(joint_law(400, validate("1/4,1/4,1/4,1/4"), "bridge", backend="float"))
    assert row.metric == "KS"
    assert row.scales == pytest.approx((200**0.5, 200**0.5))
    row = compare_law(joint_law(400, validate("0.25,0.25,0.3,0.2"), "none", backend="float"))
    assert row.metric == "KS" and row.scales[1] == 1.0
    assert 0 <= row.value <= 1
