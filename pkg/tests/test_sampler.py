import math
import warnings

import numpy as np
import pytest

from quadreturns import _numba_kernels, _numpy_kernels, oracle, sampler
from quadreturns.errors import BudgetExhausted
from quadreturns.sampler import acceptance_forecast, sample
from quadreturns.walk import validate

SYM = validate("1/4,1/4,1/4,1/4")

# Random123 known-answer vectors for Philox4x32-10
KAT = [
    ((0, 0, 0, 0), (0, 0), (0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8)),
    ((0xFFFFFFFF,) * 4, (0xFFFFFFFF,) * 2, (0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD)),
    (
        (0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344),
        (0xA4093822, 0x299F31D0),
        (0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1),
    ),
]


@pytest.mark.parametrize("ctr,key,want", KAT)
def test_philox_known_answers(ctr, key, want):
    got = _numba_kernels.philox4x32(*map(np.uint64, ctr), *map(np.uint64, key))
    assert tuple(int(v) for v in got) == want
    arrs = [np.array([v], dtype=np.uint64) for v in ctr + key]
    got = _numpy_kernels.philox4x32(*arrs)
    assert tuple(int(np.asarray(v).ravel()[0]) for v in got) == want


def test_simulation_kernels_agree():
    args = (2**40 + 3, 1000, 5000, 37, 0.2, 0.5, 0.7)
    a = _numba_kernels.simulate_block(*args)
    b = _numpy_kernels.simulate_block(*args)
    for x, y in zip(a, b):
        assert (np.asarray(x) == np.asarray(y)).all()


def test_block_split_does_not_change_paths():
    whole = _numba_kernels.simulate_block(9, 0, 300, 20, 0.25, 0.5, 0.75)
    parts = [_numba_kernels.simulate_block(9, s, 100, 20, 0.25, 0.5, 0.75) for s in (0, 100, 200)]
    for i in range(5):
        assert (whole[i] == np.concatenate([p[i] for p in parts])).all()


def test_two_step_unconditioned():
    law = sample(2, SYM, "none", seed=11, trials=10**6)
    assert abs(law.cells()[(1, 0)] - 0.125) <= 0.003


def test_two_step_meander_rate():
    law = sample(2, SYM, "meander", seed=11, trials=10**6)
    assert abs(law.acceptance_rate - 0.375) <= 0.003


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        sample(2, SYM, trials=0)
    with pytest.raises(ValueError):
        sample(3, SYM, "bridge", trials=10)
    with pytest.raises(ValueError):
        sample(2, SYM, trials=10, method="magic")


def test_determinism_and_lanes():
    kw = dict(seed=2024, trials=200_000)
    a = sample(8, SYM, "bridge", lanes=1, **kw)
    b = sample(8, SYM, "bridge", lanes=1, **kw)
    c = sample(8, SYM, "bridge", lanes=4, **kw)
    assert a.histogram == b.histogram == c.histogram
    assert repr(a.cells()) == repr(c.cells())
    d = sample(8, SYM, "bridge", seed=2025, trials=200_000)
    assert d.histogram != a.histogram


def test_lanes_from_environment(monkeypatch):
    monkeypatch.setenv(sampler.THREADS_ENV, "3")
    assert sampler.default_lanes() == 3
    monkeypatch.setenv(sampler.THREADS_ENV, "0")
    with pytest.raises(ValueError):
        sampler.default_lanes()


def test_budget_exhausted_flagged():
    w = validate("0.05,0.45,0.05,0.45")
    with pytest.warns(BudgetExhausted):
        law = sample(30, w, "meander", seed=1, trials=100)
    assert law.empty and law.cells() == {}


@pytest.mark.parametrize("cond", ["none", "bridge", "meander", "nnb"])
def test_small_n_consistency(cond):
    law = sample(6, SYM, cond, seed=5, trials=400_000)
    exact = oracle.enumerate_joint(6, SYM, cond)
    ref = exact.conditional().astype(float)
    assert 0.5 * np.abs(law.table(ref.shape) - ref).sum() < 0.02
    assert abs(law.event_probability - float(exact.event_probability)) < 4 * math.sqrt(
        float(exact.event_probability) / 400_000
    ) + 1e-12


@pytest.mark.parametrize("cond", ["none", "bridge", "meander"])
def test_tilted_estimates_agree_with_direct(cond):
    w = validate("0.3,0.1,0.4,0.2")
    n = 10
    direct = sample(n, w, cond, seed=1, trials=300_000)
    tilted = sample(n, w, cond, seed=2, trials=300_000, method="tilted")
    for x, y in [(0, 0), (2, 0), (2, 2), (4, 2)]:
        ev = lambda k, x=x, y=y: k[2] == x and k[3] == y
        m1, s1 = direct.estimate(ev)
        m2, s2 = tilted.estimate(ev)
        assert abs(m1 - m2) <= 4 * math.hypot(s1, s2) + 1e-12


def test_tilted_reduces_to_rejection_without_drift():
    a = sample(8, SYM, "meander", seed=3, trials=50_000)
    b = sample(8, SYM, "meander", seed=3, trials=50_000, method="tilted")
    assert a.histogram == b.histogram
    assert a.cells() == pytest.approx(b.cells(), rel=1e-12)


def test_forecasts():
    assert acceptance_forecast(0, SYM, "meander") == 1
    assert acceptance_forecast(50, SYM, "none") == 1
    assert acceptance_forecast(100, SYM, "meander") == pytest.approx(4 / math.pi / 100, rel=1e-12)
    assert acceptance_forecast(200, validate("0.1,0.3,0.2,0.4"), "meander") < sampler.REFUSE_BELOW
    # order of magnitude against exact event probabilities
    from quadreturns.shuffle import joint_law

    for cond in ("bridge", "nnb", "meander"):
        for spec in ("1/4,1/4,1/4,1/4", "0.3,0.1,0.4,0.2"):
            w = validate(spec)
            exact = joint_law(200, w, cond, backend="float").event_probability
            assert 0.5 < acceptance_forecast(200, w, cond) / exact < 2


def test_excursion_consistency_with_larger_budget():
    ref = oracle.enumerate_joint(8, SYM, "nnb").conditional().astype(float)
    law = sample(8, SYM, "nnb", seed=12345, trials=2 * 10**7)
    assert 0.5 * np.abs(law.table(ref.shape) - ref).sum() <= 0.01
