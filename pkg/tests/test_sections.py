import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lpsections.constants import diag_limit
from lpsections.errors import DomainError, ValidationError
from lpsections.sections import (
    Direction,
    SectionEstimate,
    ball_volume_2d,
    compare_candidates,
    cylinder_bound,
    radial_cdf,
    radial_cdf_closed,
    radial_ks_distance,
    section_brute,
    section_mc,
    section_polya,
)

vectors = st.lists(st.floats(0.05, 1.0), min_size=2, max_size=3)


@pytest.mark.parametrize(
    "coords",
    [(1.0,), (0.6, 0.8), (0.8, -0.6), (0.8, 0.6 + 1e-9), (math.nan, 1.0)],
)
def test_direction_rejects(coords):
    with pytest.raises(ValidationError):
        Direction(coords)


@given(st.lists(st.floats(-10, 10), min_size=2, max_size=8))
def test_direction_normalized_invariants(values):
    assume(any(abs(v) > 1e-3 for v in values))
    d = Direction.normalized(values)
    c = np.array(d.coords)
    assert abs(math.fsum(c * c) - 1) <= 1e-12
    assert np.all(c >= 0) and np.all(np.diff(c) <= 0)
    assert Direction.from_dict(d.to_dict()) == d


def test_direction_equal():
    d = Direction.equal(2, 5)
    assert d.support == (1 / math.sqrt(2), 1 / math.sqrt(2))
    with pytest.raises(ValidationError):
        Direction.equal(0, 3)


def test_section_estimate_validation():
    with pytest.raises(DomainError):
        SectionEstimate(value=0.0, method="polya", err=0.0)
    e = SectionEstimate(value=1.2, method="mc", err=0.01, meta={"seed": 3})
    assert SectionEstimate.from_dict(e.to_dict()) == e


def test_oracles(oracles):
    a3 = section_polya(6.0, Direction.equal(3, 3))
    assert a3.value == pytest.approx(float(oracles["section_3_6_diag"]), abs=1e-10)
    mixed = Direction.normalized([0.8, 0.5, 0.33166247903554])
    assert section_polya(3.0, mixed).value == pytest.approx(float(oracles["section_3_3_mixed"]), abs=1e-9)
    assert section_brute(3.0, mixed).value == pytest.approx(float(oracles["section_3_3_mixed"]), abs=1e-9)


@settings(max_examples=10)
@given(vectors, st.sampled_from([3.0, 6.0, 8.0, 26.265]))
def test_polya_matches_brute(values, p):
    a = Direction.normalized(values)
    assert abs(section_polya(p, a, tol=1e-8).value - section_brute(p, a).value) <= 1e-5


@pytest.mark.parametrize("p", [3.0, 8.0])
def test_polya_matches_mc(p):
    a = Direction.normalized([0.9, 0.4, 0.3])
    mc = section_mc(p, a, samples=200_000, seed=11)
    assert abs(section_polya(p, a).value - mc.value) <= 3 * mc.err


def test_mc_is_deterministic():
    a = Direction.equal(3, 3)
    first = section_mc(6.0, a, samples=50_000, seed=5)
    again = section_mc(6.0, a, samples=50_000, seed=5)
    other = section_mc(6.0, a, samples=50_000, seed=6)
    assert first == again
    assert first.value != other.value
    with pytest.raises(DomainError):
        section_mc(6.0, a, samples=100)


def test_coordinate_hyperplane_is_one():
    for p in (3.0, 8.0, 100.0):
        est = section_polya(p, Direction.equal(1, 4))
        assert est.value == 1.0 and est.method == "exact"
        assert section_brute(p, Direction.equal(1, 3)).value == pytest.approx(1.0, abs=1e-9)


def test_p2_all_candidates_one():
    rows = compare_candidates(2.0, 4)
    assert all(abs(r.value - 1.0) <= 1e-9 for r in rows)


def test_candidate_order_p8():
    rows = {r.label: r.value for r in compare_candidates(8.0, 4)}
    assert rows["a(2)"] > rows["a(4)"] > rows["a(3)"]
    assert rows["a(2)"] == pytest.approx(rows["a(2) closed form"], abs=3e-11)
    tight = section_polya(8.0, Direction.equal(2, 4), tol=1e-13)
    assert tight.value == pytest.approx(2 ** (3 / 8), abs=1e-12)


def test_monotone_in_p():
    a = Direction.equal(3, 3)
    vals = [section_polya(p, a).value for p in (2.0, 3.0, 4.0, 6.0, 8.0)]
    assert all(b >= a_ - 1e-9 for a_, b in zip(vals, vals[1:]))


def test_diagonal_convergence():
    p = 26.265
    lim = diag_limit(p)
    a4 = section_polya(p, Direction.equal(4, 4)).value
    a12 = section_polya(p, Direction.equal(12, 12)).value
    assert abs(a12 - lim) < abs(a4 - lim)


@settings(max_examples=8)
@given(st.integers(2, 6), st.data())
def test_upper_bound_small_a1(n, data):
    values = data.draw(st.lists(st.floats(0.1, 1.0), min_size=n, max_size=n))
    a = Direction.normalized(values)
    assume(a.coords[0] <= 1 / math.sqrt(2))
    assert section_polya(30.0, a).value <= 2 ** (0.5 - 1 / 30) + 1e-6


@given(vectors)
def test_cylinder_bound(values):
    a = Direction.normalized(values)
    assert section_brute(8.0, a).value <= cylinder_bound(a) + 1e-9


def test_two_dim_brute_closed_form():
    a = Direction((1 / math.sqrt(2), 1 / math.sqrt(2)))
    for p in (3.0, 6.0):
        assert section_brute(p, a).value == pytest.approx(2 ** (0.5 - 1 / p), abs=1e-12)
    assert ball_volume_2d(2.0) == pytest.approx(math.pi)


def test_brute_needs_small_n():
    with pytest.raises(DomainError):
        section_brute(3.0, Direction.equal(4, 4))


@pytest.mark.parametrize("p", [3.0, 26.265])
def test_radial_law(p):
    x = np.array([0.3, 0.8, 1.0, 1.2])
    assert np.allclose(radial_cdf(p, x), radial_cdf_closed(p, x), atol=1e-12)
    assert radial_ks_distance(p, samples=100_000, seed=1) < 0.006
