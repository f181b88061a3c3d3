import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from cuspscope.wavelets import (
    InadmissibleWaveletError,
    UnsupportedDimensionError,
    WaveletError,
    WaveletSpec,
    admissibility_constant,
    admissibility_profile,
    eval_spectrum,
    gaussian_derivative,
    laplacian_of,
    log_normal,
    moment_decay_order,
    normalized,
    position_samples,
    reconstruction_wavelet,
    strictly_admissible,
)


def _quad_profile(g, u=1.0):
    """Independent oracle: adaptive quadrature of int da/a |ghat(a u)|^2."""
    f = lambda t: abs(eval_spectrum(g, np.array([math.exp(t) * u]))[0]) ** 2
    val, _ = integrate.quad(f, -40, 40, limit=400, epsabs=1e-14, epsrel=1e-13)
    return val


# -- spectra -----------------------------------------------------------------


def test_log_normal_at_unit_frequency_is_one():
    assert eval_spectrum(log_normal(1), np.array([1.0]))[0] == 1.0


@pytest.mark.parametrize("w", [log_normal(1), gaussian_derivative(2), gaussian_derivative(5),
                               laplacian_of(log_normal(1))])
def test_spectrum_vanishes_at_zero(w):
    assert eval_spectrum(w, np.array([0.0]))[0] == 0.0


def test_spectrum_vanishes_at_zero_2d():
    w = log_normal(2)
    assert eval_spectrum(w, (np.array([0.0]), np.array([0.0])))[0] == 0.0


def test_mexican_hat_at_unit_frequency():
    assert eval_spectrum(gaussian_derivative(2), np.array([1.0]))[0] == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_log_normal_is_radial_in_2d():
    rng = np.random.default_rng(0)
    r = np.exp(rng.uniform(-3, 3, 50))
    th = rng.uniform(0, 2 * np.pi, 50)
    v2 = eval_spectrum(log_normal(2), (r * np.cos(th), r * np.sin(th)))
    v1 = eval_spectrum(log_normal(1), r)
    np.testing.assert_allclose(v2, v1, rtol=1e-14)


def test_unsupported_dimension():
    with pytest.raises(UnsupportedDimensionError):
        WaveletSpec("log-normal-radial", 3)


def test_invalid_specs_rejected():
    with pytest.raises(WaveletError):
        WaveletSpec("no-such-kind")
    with pytest.raises(WaveletError):
        WaveletSpec("gaussian-derivative", 1, {"order": 0})
    with pytest.raises(WaveletError):
        WaveletSpec("log-normal-radial", 1, norm=-1.0)


def test_spec_json_round_trip():
    for w in (log_normal(2), gaussian_derivative(4, 2), laplacian_of(gaussian_derivative(2)),
              reconstruction_wavelet(log_normal(1))):
        assert WaveletSpec.from_dict(w.to_dict()) == w


def test_s0_membership_flags():
    assert log_normal(1).in_s0
    assert not gaussian_derivative(4).in_s0
    assert laplacian_of(gaussian_derivative(2)).moment_order == 4


@given(st.floats(min_value=-8, max_value=8))
def test_log_normal_decays_faster_than_powers(t):
    k = math.exp(t)
    v = eval_spectrum(log_normal(1), np.array([k]))[0]
    assert v == pytest.approx(math.exp(-t * t), rel=1e-14)


# -- admissibility ----------------------------------------------------------


def test_log_normal_admissibility_constant():
    c = admissibility_constant(log_normal(1))
    assert c == pytest.approx(math.sqrt(math.pi / 2), rel=1e-10)
    assert c == pytest.approx(_quad_profile(log_normal(1)), rel=1e-10)


def test_mexican_hat_admissibility_constant():
    c = admissibility_constant(gaussian_derivative(2))
    assert c == pytest.approx(0.5 * math.gamma(2), rel=1e-10)
    assert c == pytest.approx(_quad_profile(gaussian_derivative(2)), rel=1e-10)


@pytest.mark.parametrize("w", [log_normal(2), gaussian_derivative(4, 2), gaussian_derivative(3, 2),
                               laplacian_of(log_normal(2))])
def test_radial_profile_is_direction_independent(w):
    p = admissibility_profile(w)
    assert np.all(np.isfinite(p.values)) and p.min_value > 0
    assert p.max_value / p.min_value - 1 < 1e-9


def test_laplacian_of_log_normal_is_admissible():
    p = admissibility_profile(laplacian_of(log_normal(1)))
    assert p.min_value > 0 and np.isfinite(p.max_value)
    assert p.constant == pytest.approx(_quad_profile(laplacian_of(log_normal(1))), rel=1e-9)


def test_inadmissible_profile_rejected():
    # the squared spectrum underflows to zero everywhere
    tiny = WaveletSpec("log-normal-radial", 1, norm=5e-324)
    with pytest.raises(InadmissibleWaveletError):
        reconstruction_wavelet(tiny)


# -- reconstruction wavelets --------------------------------------------------


@pytest.mark.parametrize("g", [log_normal(1), log_normal(2), gaussian_derivative(4, 2)])
def test_reconstruction_cross_profile_is_one(g):
    p = admissibility_profile(g, reconstruction_wavelet(g))
    np.testing.assert_allclose(np.abs(p.values), 1.0, atol=1e-6)


def test_unit_profile_wavelet_is_its_own_reconstruction():
    g = normalized(log_normal(1))
    r = reconstruction_wavelet(g)
    k = np.geomspace(1e-2, 1e2, 101)
    np.testing.assert_allclose(eval_spectrum(r, k), eval_spectrum(g, k), rtol=1e-6)


def test_reconstruction_is_idempotent():
    unit = strictly_admissible(gaussian_derivative(4, 2))
    k = (np.geomspace(1e-2, 1e2, 51), np.geomspace(1e-2, 1e2, 51)[::-1])
    np.testing.assert_allclose(eval_spectrum(reconstruction_wavelet(unit), k), eval_spectrum(unit, k),
                               rtol=1e-6)


def test_strictly_admissible_log_normal_scaling():
    g = log_normal(1)
    k = np.geomspace(1e-2, 1e2, 41)
    np.testing.assert_allclose(eval_spectrum(strictly_admissible(g), k),
                               eval_spectrum(g, k) / (math.pi / 2) ** 0.25, rtol=1e-10)


def test_normalized_has_unit_constant():
    assert admissibility_constant(normalized(log_normal(2))) == pytest.approx(1.0, rel=1e-10)


# -- laplacian_of and moments -----------------------------------------------


@given(st.lists(st.floats(min_value=-50, max_value=50, allow_nan=False), min_size=1, max_size=20))
@settings(max_examples=50)
def test_laplacian_of_multiplies_by_minus_k_squared(ks):
    k = np.asarray(ks)
    g = gaussian_derivative(4)
    assert np.array_equal(eval_spectrum(laplacian_of(g), k), -(np.abs(k) ** 2) * eval_spectrum(g, k))


def test_laplacian_of_log_normal_at_unit_frequency():
    assert eval_spectrum(laplacian_of(log_normal(1)), np.array([1.0]))[0] == -1.0
    assert eval_spectrum(laplacian_of(log_normal(1)), np.array([0.0]))[0] == 0.0


@pytest.mark.parametrize("g, max_order, expected", [
    (log_normal(1), 10, 10),
    (gaussian_derivative(2), 10, 1),
    (gaussian_derivative(4), 3, 3),
    (gaussian_derivative(6), 10, 5),
    (laplacian_of(gaussian_derivative(2)), 10, 3),
])
def test_moment_decay_order(g, max_order, expected):
    assert moment_decay_order(g, max_order) == expected


def test_moment_decay_order_needs_positive_order():
    with pytest.raises(ValueError):
        moment_decay_order(log_normal(1), 0)


def test_position_samples_match_fourier_definition():
    # ghat(0) = 0 means the samples integrate to zero; the peak sits at the origin
    x, g = position_samples(gaussian_derivative(2), 1024, 64.0)
    dx = x[1] - x[0]
    assert abs(np.sum(g) * dx) < 1e-10
    assert np.argmax(np.abs(g)) == np.argmin(np.abs(x))
    # mexican hat: g(x) = (1 - x^2) exp(-x^2/2) / sqrt(2 pi)
    ref = (1 - x**2) * np.exp(-x**2 / 2) / math.sqrt(2 * math.pi)
    np.testing.assert_allclose(np.real(g), ref, atol=1e-10)
