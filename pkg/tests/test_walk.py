from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadreturns.errors import NonPositiveProbability, ParityMismatch, SumNotOne
from quadreturns.walk import (
    Conditioning,
    Drift,
    Parity,
    check_conditioning,
    extracted_params,
    resolve_backend,
    tilt_factor,
    validate,
)

from conftest import paths


def test_symmetric_walk():
    w = validate("0.25,0.25,0.25,0.25")
    assert w.h1 == w.h2 == F(1, 2)
    assert w.drift_class == (Drift.ZERO, Drift.ZERO)


def test_negative_walk():
    w = validate("0.1,0.3,0.2,0.4")
    assert (w.h1, w.h2) == (F(2, 5), F(3, 5))
    assert w.drift_class == (Drift.NEGATIVE, Drift.NEGATIVE)


def test_rejects_bad_inputs():
    with pytest.raises(SumNotOne):
        validate("0.5,0.5,0.5,0.5")
    with pytest.raises(NonPositiveProbability):
        validate("0,0.5,0.25,0.25")
    with pytest.raises(SumNotOne):
        validate([0.25, 0.25, 0.25, 0.2500001])
    with pytest.raises(ValueError):
        validate("1/4,1/4,1/2")


def test_float_sum_tolerance():
    w = validate([0.1, 0.2, 0.3, 0.4 + 1e-13])
    assert not w.is_rational


def test_float_zero_drift_threshold():
    assert validate([0.25, 0.25, 0.25, 0.25]).drift(1) is Drift.ZERO
    assert validate([0.25 + 1e-9, 0.25 - 1e-9, 0.25, 0.25]).drift(1) is Drift.POSITIVE


def test_extracted_params():
    assert extracted_params(validate("1/4,1/4,1/4,1/4"), 1) == (F(1, 2), F(1, 2), F(1, 2))
    w = validate("0.1,0.3,0.2,0.4")
    assert extracted_params(w, 1) == (F(1, 4), F(3, 4), F(2, 5))
    assert extracted_params(w, 2) == (F(1, 3), F(2, 3), F(3, 5))


@given(st.lists(st.integers(1, 50), min_size=4, max_size=4))
def test_extracted_params_recover_steps(weights):
    total = sum(weights)
    w = validate([F(v, total) for v in weights])
    for axis in (1, 2):
        pt, qt, h = extracted_params(w, axis)
        assert (h * pt, h * qt) == w.pq(axis)
        assert pt + qt == 1
    assert w.h1 + w.h2 == 1


def test_tilt_examples():
    assert tilt_factor(F(1, 2), 10, 4) == 1
    assert tilt_factor(F(1, 4), 2, 0) == F(3, 4)
    with pytest.raises(ParityMismatch):
        tilt_factor(F(1, 4), 1, 0)


def _path_probability(p, steps):
    out = F(1)
    for s in steps:
        out *= p if s > 0 else 1 - p
    return out


@pytest.mark.parametrize("p", [F(1, 4), F(2, 3), F(1, 10)])
def test_tilt_matches_path_enumeration(p):
    # survival to n and endpoint x, for every n <= 10
    for n in range(11):
        by_x = {}
        for steps in paths(n):
            pos, alive = 0, True
            for s in steps:
                pos += s
                alive &= pos >= 0
            if alive:
                a, b = by_x.get(pos, (0, 0))
                by_x[pos] = (a + _path_probability(p, steps), b + F(1, 2**n))
        for x, (tilted, sym) in by_x.items():
            assert tilted == tilt_factor(p, n, x) * sym


@given(st.fractions(F(1, 100), F(99, 100)), st.integers(0, 30), st.data())
def test_tilt_identities(p, n, data):
    x = data.draw(st.integers(-n, n).filter(lambda v: (n - v) % 2 == 0))
    q = 1 - p
    assert tilt_factor(p, n, x) * tilt_factor(q, n, x) == (4 * p * q) ** n
    assert tilt_factor(p, n, x) == tilt_factor(q, n, -x)
    assert abs(tilt_factor(float(p), n, x) - float(tilt_factor(p, n, x))) <= 1e-12 * max(
        1.0, float(tilt_factor(p, n, x))
    )


def test_conditioning_parity():
    check_conditioning(3, Conditioning.MEANDER)
    for c in (Conditioning.BRIDGE, Conditioning.NONNEG_BRIDGE):
        with pytest.raises(ParityMismatch):
            check_conditioning(3, c)
    assert Conditioning.parse("excursion") is Conditioning.NONNEG_BRIDGE
    assert Parity.of(7) is Parity.ODD


def test_backend_resolution():
    w = validate("1/4,1/4,1/4,1/4")
    assert resolve_backend(w, 10) == "exact"
    assert resolve_backend(w, 1000) == "float"
    assert resolve_backend(validate([0.25] * 4), 10) == "float"
