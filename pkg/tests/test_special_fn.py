import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpsections import special_fn as sf
from lpsections.errors import DomainError


def test_gamma_identities():
    assert sf.gamma(1.0) == pytest.approx(1.0, rel=1e-15)
    assert sf.gamma(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)


def test_gamma_matches_oracle(oracles):
    ref = float(oracles["gamma_1_plus_1_over_26.265"])
    assert abs(sf.gamma(1 + 1 / 26.265) / ref - 1) < 1e-14


@given(st.floats(0.5, 170.0))
def test_gamma_against_math(x):
    assert sf.gamma(x) == pytest.approx(math.gamma(x), rel=1e-14)


@given(st.floats(170.0, 200.0))
def test_lgamma_against_math(x):
    assert sf.lgamma(x) == pytest.approx(math.lgamma(x), rel=1e-14)


def test_polygamma_values():
    assert sf.trigamma(1.0) == pytest.approx(math.pi**2 / 6, rel=1e-13)
    assert sf.trigamma(2.5) == pytest.approx(math.pi**2 / 2 - 40 / 9, rel=1e-12)
    assert sf.digamma(1.5) - sf.digamma(2.5) == pytest.approx(-2 / 3, rel=1e-13)
    assert sf.digamma(1.0) == pytest.approx(-sf.EULER_GAMMA, rel=1e-14)


@pytest.mark.parametrize("x", [0.3, 1.0, 2.7, 9.0])
def test_series_agree(x):
    # the series represent psi(1 + x) and psi'(1 + x)
    assert sf.digamma_series(x) == pytest.approx(sf.digamma(1 + x), abs=1e-5)
    assert sf.trigamma_series(x) == pytest.approx(sf.trigamma(1 + x), abs=1e-9)


@given(st.floats(0.5, 100.0))
def test_duplication(x):
    lhs = sf.digamma(2 * x)
    rhs = 0.5 * sf.digamma(x) + 0.5 * sf.digamma(x + 0.5) + math.log(2)
    assert abs(lhs - rhs) <= 1e-12
    assert abs(4 * sf.trigamma(2 * x) - sf.trigamma(x + 0.5) - sf.trigamma(x)) <= 1e-11


def test_monotonicity_on_grid():
    x = np.geomspace(0.05, 300, 400)
    psi = np.array([sf.digamma(v) for v in x])
    tri = np.array([sf.trigamma(v) for v in x])
    assert np.all(np.diff(psi) > 0)
    assert np.all(tri > 0) and np.all(np.diff(tri) < 0)


def test_e1(oracles):
    assert sf.exp_integral_e1(1.0) == pytest.approx(float(oracles["e1_at_1"]), rel=1e-13)
    assert sf.EULER_GAMMA + 2 * sf.exp_integral_e1(1.0) < 1.016
    assert sf.exp_integral_e1(50.0) < 1e-23


@pytest.mark.parametrize("fn", [sf.gamma, sf.lgamma, sf.digamma, sf.trigamma, sf.exp_integral_e1])
@pytest.mark.parametrize("x", [0.0, -1.5])
def test_nonpositive_rejected(fn, x):
    with pytest.raises(DomainError):
        fn(x)
