import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cuspscope.geometry import (
    Complement,
    Empty,
    Full,
    HalfSpacePoint,
    Intersection,
    Lattice,
    ParabolicStrip,
    Raster,
    Union,
    compose,
    delta,
    dist,
    gamma_neighborhood,
    identity,
    influence_region,
    inverse,
    region_from_dict,
    sandwich_region,
    well_separated,
)

coord = st.floats(min_value=-50, max_value=50, allow_nan=False)
log_scale = st.floats(min_value=-6, max_value=6)


@st.composite
def points(draw, dim=2):
    b = np.array([draw(coord) for _ in range(dim)])
    return HalfSpacePoint(b, math.exp(draw(log_scale)))


def _close(x, y, rtol=1e-12):
    return abs(x - y) <= rtol * max(1.0, abs(x), abs(y))


def _pt(b, a):
    return HalfSpacePoint(np.atleast_1d(np.asarray(b, dtype=float)), float(a))


# -- group law -----------------------------------------------------------------


def test_inverse_example():
    q = inverse(_pt(2.0, 4.0))
    assert q.b[0] == -0.5 and q.a == 0.25


def test_compose_formula():
    p = compose(_pt([1.0, 2.0], 3.0), _pt([0.5, -1.0], 2.0))
    np.testing.assert_array_equal(p.b, [2.5, -1.0])
    assert p.a == 6.0


@given(points())
def test_identity_and_inverse(p):
    e = identity(2)
    q = compose(p, e)
    np.testing.assert_array_equal(q.b, p.b)
    assert q.a == p.a
    r = compose(p, inverse(p))
    assert np.all(np.abs(r.b) <= 1e-12 * max(1.0, np.max(np.abs(p.b)))) and _close(r.a, 1.0)


@given(points(), points(), points())
def test_associativity(p, q, r):
    left = compose(compose(p, q), r)
    right = compose(p, compose(q, r))
    assert _close(left.a, right.a)
    for x, y in zip(left.b, right.b):
        assert abs(x - y) <= 1e-12 * max(1.0, abs(x), abs(y), np.max(np.abs(p.b)) * q.a * 10)


# -- Delta and dist ------------------------------------------------------------


@pytest.mark.parametrize("b, a, expected", [(0.0, 1.0, 2.0), (0.0, 2.0, 2.5), (1.0, 1.0, 4.0)])
def test_delta_examples(b, a, expected):
    assert delta(_pt(b, a)) == expected


def test_dist_examples():
    p = _pt(0.7, 0.3)
    assert dist(p, p) == 2.0
    assert dist(_pt(0.0, 1.0), _pt(0.0, 2.0)) == 2.5


@given(points())
def test_delta_of_inverse(p):
    assert _close(delta(inverse(p)), delta(p))
    assert delta(p) >= 2.0


@given(points(), points())
def test_dist_symmetric_and_group_form(p, q):
    d = dist(p, q)
    assert _close(d, dist(q, p))
    assert _close(d, delta(compose(inverse(p), q)))
    assert d >= 2.0


@given(points(), points())
def test_delta_triangle_inequalities(p, q):
    dp, dq, dpq = delta(p), delta(q), delta(compose(p, q))
    assert max(dp / dq, dq / dp) <= dpq * (1 + 1e-12)
    assert dpq <= dp * dq * (1 + 1e-12)


@given(points(), points(), points())
def test_dist_triangle_inequalities(p, q, r):
    dpr, dpq, dqr = dist(p, r), dist(p, q), dist(q, r)
    assert dpr <= dpq * dqr * (1 + 1e-12)
    assert dpr >= dpq / dqr * (1 - 1e-12)


@given(points(), points(), points())
def test_dist_left_invariance(p, q, g):
    assert _close(dist(compose(g, p), compose(g, q)), dist(p, q), rtol=1e-10)


# -- regions -------------------------------------------------------------------

LAT = Lattice([np.linspace(-2.0, 2.0, 33)], np.geomspace(0.05, 20.0, 21))


@st.composite
def rasters(draw, max_points=6):
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    count = draw(st.integers(1, max_points))
    mask = np.zeros(LAT.shape, dtype=bool)
    mask.flat[rng.choice(mask.size, size=count, replace=False)] = True
    return Raster(LAT, mask)


@given(rasters())
def test_complement_involution(r):
    assert np.array_equal(r.complement().complement().mask, r.mask)
    assert np.array_equal(Complement(Complement(r)).raster(LAT).mask, r.mask)


def test_composed_regions():
    strip = ParabolicStrip(1.0, "above")
    cap = ParabolicStrip(0.0, "below", a_max=1.0)
    both = Intersection([strip, cap]).raster(LAT).mask
    either = Union([strip, cap]).raster(LAT).mask
    s, c = strip.raster(LAT).mask, cap.raster(LAT).mask
    assert np.array_equal(both, s & c)
    assert np.array_equal(either, s | c)
    assert not Empty().raster(LAT).mask.any()
    assert Full().raster(LAT).mask.all()


def test_region_json_round_trip():
    region = Intersection([ParabolicStrip(2.0, "below", a_max=0.5), Complement(ParabolicStrip(1.0))])
    again = region_from_dict(region.to_dict())
    assert np.array_equal(again.raster(LAT).mask, region.raster(LAT).mask)


def test_parabolic_strip_membership():
    strip = ParabolicStrip(2.0, "above", a_max=0.5, center=1.0)
    b = np.array([[1.0], [1.5], [1.5], [1.0]])
    a = np.array([0.1, 0.3, 0.2, 0.7])
    np.testing.assert_array_equal(strip.contains(b, a), [True, True, False, False])


def test_gamma_neighborhood_of_empty_is_empty():
    empty = Raster(LAT, np.zeros(LAT.shape, dtype=bool))
    assert not gamma_neighborhood(empty, 0.5).raster(LAT).mask.any()


@given(rasters(), st.floats(0.05, 1.0), st.floats(0.05, 1.0))
@settings(max_examples=30, deadline=None)
def test_gamma_neighborhood_monotone_in_eps(r, e1, e2):
    lo, hi = sorted((e1, e2))
    small = gamma_neighborhood(r, lo).raster(LAT).mask
    big = gamma_neighborhood(r, hi).raster(LAT).mask
    assert not np.any(small & ~big)


@given(rasters(), st.floats(1.0, 2.0))
@settings(max_examples=20, deadline=None)
def test_gamma_neighborhood_contains_base_when_radius_allows(r, eps):
    # Delta^eps >= 2 for eps >= 1 since Delta >= 2
    nb = gamma_neighborhood(r, eps).raster(LAT).mask
    assert not np.any(r.mask & ~nb)


@given(rasters(), st.floats(0.05, 0.5), st.floats(0.05, 0.5))
@settings(max_examples=30, deadline=None)
def test_gamma_neighborhood_associativity(r, e1, e2):
    e3 = e1 + e2 * (1 + e1)
    inner = gamma_neighborhood(r, e1).raster(LAT)
    assume(inner.mask.any())
    outer = gamma_neighborhood(inner, e2).raster(LAT).mask
    bound = gamma_neighborhood(r, e3).raster(LAT).mask
    assert not np.any(outer & ~bound)


# -- well separation -----------------------------------------------------------

STRIPS = Lattice([np.linspace(-4.0, 4.0, 161)], np.geomspace(1e-3, 1e3, 61))


def test_strips_separated_when_lower_exponent_is_larger():
    omega = ParabolicStrip(2.0, "below", a_max=0.5)
    sigma = ParabolicStrip(1.0, "above", a_max=0.5)
    rep = well_separated(omega, sigma, 0.25, STRIPS)
    assert rep.separated and rep.ratio > 1.5


def test_strips_not_separated_when_exponents_swap():
    omega = ParabolicStrip(1.0, "below", a_max=0.5)
    sigma = ParabolicStrip(2.0, "above", a_max=0.5)
    rep = well_separated(omega, sigma, 0.25, STRIPS)
    assert not rep.separated


def test_literal_strip_pair_overlaps():
    # {a > b^2} and {a < |b|} share the points with b^2 < a < |b|
    omega = ParabolicStrip(2.0, "above", a_max=0.5)
    sigma = ParabolicStrip(1.0, "below", a_max=0.5)
    rep = well_separated(omega, sigma, 0.25, STRIPS)
    assert not rep.separated and rep.distance == 2.0


def test_overlapping_sets_report_witness_at_distance_two():
    r = Raster(LAT, np.zeros(LAT.shape, dtype=bool))
    r.mask[5, 10:14] = True
    # eps = 1 keeps Delta^eps >= 2, so shared points violate the bound
    rep = well_separated(r, r, 1.0)
    assert not rep.separated and rep.distance == 2.0


def test_empty_sets_are_vacuously_separated():
    empty = Raster(LAT, np.zeros(LAT.shape, dtype=bool))
    full = Raster(LAT, np.ones(LAT.shape, dtype=bool))
    for rep in (well_separated(empty, full, 0.2), well_separated(full, empty, 0.2)):
        assert rep.separated and rep.vacuous


@st.composite
def separated_pairs(draw, eps=0.25):
    omega = draw(rasters())
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    grown = gamma_neighborhood(omega, 1.1 * eps, include_base=True).raster(LAT).mask
    return omega, Raster(LAT, ~grown & (rng.random(LAT.shape) < 0.5))


@given(separated_pairs())
@settings(max_examples=20, deadline=None)
def test_separation_symmetry(pair):
    omega, sigma = pair
    eps = 0.25
    assume(sigma.mask.any())
    assert well_separated(omega, sigma, eps).separated
    assert well_separated(sigma, omega, eps / (1 + eps)).separated


@given(separated_pairs(eps=0.4))
@settings(max_examples=15, deadline=None)
def test_sandwich_set_separates_both_ways(pair):
    omega, outside = pair
    eps = 0.4
    assume(outside.mask.any())
    xi = sandwich_region(omega, eps)
    assert not np.any(omega.mask & ~xi.mask)
    assert well_separated(xi, outside, eps / 4).separated
    assert not np.any(xi.mask & outside.mask)
    assert well_separated(omega, xi.complement(), eps / 4 / (1 + eps)).separated


# -- influence regions ---------------------------------------------------------


def _origin_indicator(n=64):
    ind = np.zeros(n, dtype=bool)
    ind[n // 2] = True
    return influence_region(ind, 1.0, origin=-0.5)


def test_influence_apex_column():
    reg = _origin_indicator()
    a = np.geomspace(1e-4, 10, 20)
    assert reg.contains(np.zeros((20, 1)), a).all()


def test_influence_outside_cone():
    reg = _origin_indicator()
    a = np.geomspace(1e-3, 0.2, 20)
    assert not reg.contains((2 * a)[:, None], a).any()
    assert reg.contains((0.5 * a)[:, None], a).all()


def test_influence_of_full_space():
    reg = influence_region(np.ones((16, 16), dtype=bool), 1.0)
    rng = np.random.default_rng(0)
    b = rng.uniform(0, 1, size=(50, 2))
    assert reg.contains(b, np.full(50, 1e-6)).all()
