import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpsections.constants import (
    CriticalConstants,
    c_const,
    constants_at,
    d_const,
    gap_interval,
    phi_ratio,
    section_closed_forms,
    solve_p0,
    solve_p1,
    solve_p2,
)
from lpsections.errors import SolverError

P0 = solve_p0()


def test_critical_exponents():
    assert solve_p0() == pytest.approx(26.265, abs=0.005)
    assert solve_p1() == pytest.approx(4.192, abs=0.005)
    assert solve_p2() == pytest.approx(9.1147, abs=0.001)


def test_phi_brackets_p0():
    assert phi_ratio(26.0) > 1 > phi_ratio(27.0)


def test_solver_without_sign_change():
    with pytest.raises(SolverError):
        solve_p0(bracket=(3.0, 4.0))


def test_named_values():
    assert abs(c_const(2.0) - 0.25) <= 1e-12
    assert abs(d_const(2.0) - 0.25) <= 1e-12
    assert c_const(solve_p2()) == pytest.approx(0.15715, abs=1e-4)
    assert c_const(15.0) == pytest.approx(0.1584, abs=5e-4)
    assert c_const(P0) == pytest.approx(0.1609, abs=5e-4)
    assert d_const(P0) == pytest.approx(c_const(P0), abs=1e-7)
    assert d_const(1e6) == pytest.approx(1 / (2 * math.pi), abs=1e-5)


@given(st.floats(2.0, 1e4))
def test_constants_record_invariants(p):
    cc = constants_at(p)
    assert cc.c_p > 0 and cc.d_p > 0
    assert cc.h2 == pytest.approx(0.5 * math.sqrt(math.pi / cc.d_p), rel=1e-14)
    assert cc.h_inf == pytest.approx(0.5 * math.sqrt(math.pi / cc.c_p), rel=1e-14)
    assert cc.diag_limit == pytest.approx(math.gamma(1 + 1 / p) * 2 / math.pi * cc.h_inf, rel=1e-12)
    assert cc.ratio_r == pytest.approx(phi_ratio(p), rel=1e-12)
    assert CriticalConstants.from_dict(cc.to_dict()) == cc


@given(st.floats(2.01, P0 - 0.01))
def test_sign_structure_below_p0(p):
    cc = constants_at(p)
    assert cc.c_p < cc.d_p and cc.h2 < cc.h_inf


@given(st.floats(P0 + 0.01, 1e5))
def test_sign_structure_above_p0(p):
    cc = constants_at(p)
    assert cc.d_p < cc.c_p and cc.h_inf < cc.h2


def test_monotonicity():
    p2 = solve_p2()
    grid = np.geomspace(2.0, 1e4, 500)
    d = np.array([d_const(p) for p in grid])
    assert np.all(np.diff(d) < 0)
    left = np.array([c_const(p) for p in grid[grid < p2]])
    right = np.array([c_const(p) for p in grid[grid > p2]])
    assert np.all(np.diff(left) < 0) and np.all(np.diff(right) > 0)


@pytest.mark.parametrize("p", [20.0, P0])
def test_a1_threshold_below_linear_bound(p):
    # a_1 above the linear bound must imply a_1 above the threshold
    assert constants_at(p).a1_threshold < 1 / math.sqrt(2) + 1 / (3 * p) + 1 / 150


@pytest.mark.xfail(strict=True, reason="threshold lies below the linear bound, not above it; see notes")
@pytest.mark.parametrize("p", [20.0, P0])
def test_a1_threshold_above_linear_bound_as_stated(p):
    assert constants_at(p).a1_threshold > 1 / math.sqrt(2) + 1 / (3 * p) + 1 / 150


def test_closed_forms_and_gap():
    a2, _ = section_closed_forms(6.0)
    assert a2 == pytest.approx(2 ** (1 / 3), abs=1e-15)
    assert round(a2, 3) == 1.260
    for p in (P0, 50.0, 100.0, 1e4):
        lo, hi = gap_interval(p)
        assert lo == pytest.approx(1 / math.sqrt(2))
        assert 0 < hi - lo < 1 / (2 * p)
