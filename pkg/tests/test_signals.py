import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspscope.engine import GridError, ScaleGrid, forward
from cuspscope.microlocal import fit_decay
from cuspscope.signals import (
    CuspDomain,
    CuspError,
    _blend_weight,
    band_limited_random,
    composite_cusp,
    holder_cusp,
    oscillating_cusp,
    oscillation_wavelength,
    rough_background,
    smooth_step,
    smooth_window,
)
from cuspscope.wavelets import gaussian_derivative

DOMAIN = CuspDomain((0.2, 0.5), (1.0, 0.0), 2.0, 3.0, 0.6)


def test_smooth_step_is_exact_at_ends():
    u = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    np.testing.assert_array_equal(smooth_step(u)[[0, 1, 3, 4]], [0.0, 0.0, 1.0, 1.0])
    assert smooth_step(0.5) == pytest.approx(0.5)
    assert np.array_equal(smooth_window(np.array([0.0, 0.1, 0.5]), 0.1, 0.3), [1.0, 1.0, 0.0])


# -- holder cusp ----------------------------------------------------------------


def test_holder_cusp_vanishes_at_center():
    s = holder_cusp(0.3, 0.5, n_points=1024)
    assert s.samples[512] == 0.0


@pytest.mark.parametrize("alpha", [0.3, 0.7])
def test_holder_cusp_is_symmetric(alpha):
    s = holder_cusp(alpha, 0.5, n_points=1024).samples
    t = np.arange(1, 300)
    np.testing.assert_array_equal(s[512 + t], s[512 - t])


def test_holder_cusp_needs_grid_aligned_center():
    with pytest.raises(GridError):
        holder_cusp(0.5, 0.5 + 1e-4, n_points=1024)


def test_holder_cusp_rejects_bad_exponent():
    with pytest.raises(ValueError):
        holder_cusp(1.2)


def test_holder_cusp_exponent_is_recovered():
    n = 2**14
    dx = 1.0 / n
    W = forward(gaussian_derivative(4), holder_cusp(0.3, 0.5, n_points=n), ScaleGrid(2 * dx, 0.05, 40))
    fit = fit_decay(W.scales.scales, np.abs(W.values[:, n // 2]), window=(8 * dx, 0.01))
    assert fit.slope == pytest.approx(0.3, abs=0.05)


# -- cusp domains and composite signals -----------------------------------------


def test_cusp_domain_membership():
    t = np.array([0.1, 0.1, 0.1, 0.7, -0.1])
    off = np.array([0.0, 0.029, 0.031, 0.0, 0.0])
    coords = (0.2 + t, 0.5 + off)
    np.testing.assert_array_equal(DOMAIN.contains(coords), [True, True, False, False, False])


def test_cusp_domain_normalizes_axis():
    assert CuspDomain(axis=(3.0, 4.0)).axis == pytest.approx((0.6, 0.8))
    with pytest.raises(CuspError):
        CuspDomain(degree=1.0)


def test_degenerate_cusp_is_rejected():
    with pytest.raises(CuspError):
        composite_cusp(CuspDomain(extent=3 / 512), n_points=512)


def test_composite_cusp_splices_exactly():
    n = 512
    rough = rough_background(0.3, n, dimension=2, seed=4).samples
    s = composite_cusp(DOMAIN, {"kind": "constant", "value": 4.0}, n_points=n, outside=rough).samples
    chi = _blend_weight(DOMAIN.indicator(n), 3.0)
    assert (chi == 1).sum() > 100 and (chi == 0).sum() > 100
    assert np.all(s[chi == 1] == 4.0)
    assert np.array_equal(s[chi == 0], rough[chi == 0])


def test_composite_cusp_default_exterior_is_rough_background():
    n = 256
    s = composite_cusp(DOMAIN, None, 0.3, n_points=n, seed=2).samples
    rough = rough_background(0.3, n, dimension=2, seed=2, direction=(1, 1)).samples
    far = np.zeros((n, n), dtype=bool)
    far[: n // 8, :] = True
    assert np.array_equal(s[far], rough[far])


def test_oscillating_cusp_zero_crossing():
    n, alpha = 256, 1.5
    t0 = math.pi ** (-1 / alpha)
    x = 128 / n
    dom = CuspDomain((x - t0, 0.5), (1.0, 0.0), 2.0, 1.0, 0.5)
    s, t_min = oscillating_cusp(dom, alpha, n_points=n)
    assert t_min < t0
    assert abs(s.samples[128, 128]) < 1e-12


def test_oscillating_cusp_is_bounded_inside():
    s, _ = oscillating_cusp(DOMAIN, 1.5, n_points=256)
    inside = _blend_weight(DOMAIN.indicator(256), 3.0) == 1.0
    assert inside.sum() > 100
    assert np.max(np.abs(s.samples[inside])) <= 1.0


def test_oscillation_wavelength_matches_phase_derivative():
    alpha, t, h = 1.5, 0.3, 1e-6
    dphase = abs((t + h) ** -alpha - (t - h) ** -alpha) / (2 * h)
    assert oscillation_wavelength(t, alpha) == pytest.approx(2 * math.pi / dphase, rel=1e-8)


# -- probes ---------------------------------------------------------------------


@given(st.integers(0, 10_000))
@settings(max_examples=10, deadline=None)
def test_generators_are_deterministic(seed):
    a = rough_background(0.3, 256, seed=seed).samples
    b = rough_background(0.3, 256, seed=seed).samples
    assert np.array_equal(a, b)
    c = band_limited_random((2, 30), 256, seed=seed).samples
    d = band_limited_random((2, 30), 256, seed=seed).samples
    assert np.array_equal(c, d)
    e = composite_cusp(DOMAIN, {"kind": "constant", "value": 1.0}, n_points=128, seed=seed).samples
    f = composite_cusp(DOMAIN, {"kind": "constant", "value": 1.0}, n_points=128, seed=seed).samples
    assert np.array_equal(e, f)


@pytest.mark.parametrize("dim", [1, 2])
def test_band_limited_spectrum_stays_in_band(dim):
    n = 128
    s = band_limited_random((5, 20), n, dimension=dim, seed=1).samples
    m = np.fft.fftfreq(n) * n
    mod = np.sqrt(sum(x * x for x in np.meshgrid(*([m] * dim), indexing="ij")))
    spec = np.abs(np.fft.fftn(s))
    assert spec[(mod < 5) | (mod > 20)].max() < 1e-12 * spec.max()


def test_probes_have_zero_mean():
    assert abs(rough_background(0.3, 512).samples.mean()) < 1e-12
    assert abs(band_limited_random((1, 40), 512).samples.mean()) < 1e-12


def test_rough_background_exponent():
    n = 2**14
    dx = 1.0 / n
    W = forward(gaussian_derivative(4), rough_background(0.3, n, seed=0), ScaleGrid(2 * dx, 0.05, 48))
    sup = np.abs(W.values).max(axis=1)
    fit = fit_decay(W.scales.scales, sup, window=(8 * dx, 0.01))
    assert fit.slope == pytest.approx(0.3, abs=0.05)
