from math import exp, pi

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import i0, ive

from timecausal.discrete_spatial import (
    DiscreteGaussian1D,
    bessel_ratio_weights,
    dft_gaussian,
    dft_gaussian_1d,
    diffusion_check,
    s_from_degrees,
    smooth_1d,
    smooth_2d,
    spatial_derivative,
    truncation_radius,
)
from timecausal.errors import InvalidParameterError, TooSmallImageError

from .oracles import circular_extrema, mirror_period, scaled_bessel_series


def test_bessel_examples():
    np.testing.assert_array_equal(bessel_ratio_weights(0, 4), [1, 0, 0, 0, 0])
    w = bessel_ratio_weights(1.0, 1)
    assert w[0] == pytest.approx(scaled_bessel_series(0, 1.0), abs=1e-14)
    assert w[0] == pytest.approx(0.46576, abs=5e-6)
    assert w[1] == pytest.approx(0.20791, abs=5e-6)
    with pytest.raises(InvalidParameterError):
        bessel_ratio_weights(-1, 3)


@pytest.mark.parametrize("s", [0.01, 0.5, 1.0, 2.0, 3.7, 6.0, 10.0])
def test_bessel_against_power_series(s):
    w = bessel_ratio_weights(s, 20)
    ref = [scaled_bessel_series(n, s) for n in range(21)]
    np.testing.assert_allclose(w, ref, atol=1e-12, rtol=0)


@pytest.mark.parametrize("s", [50.0, 400.0, 5000.0])
def test_bessel_large_scale(s):
    w = bessel_ratio_weights(s, 60)
    assert np.all(np.isfinite(w))
    np.testing.assert_allclose(w, ive(np.arange(61), s), rtol=1e-10)


def _direct_radius(s, eps):
    weights = [scaled_bessel_series(n, s, terms=200) for n in range(80)]
    mass = weights[0]
    N = 0
    while mass * mass <= 1 - eps:
        N += 1
        mass += 2 * weights[N]
    return N


@pytest.mark.parametrize("s, eps", [(0, 1e-8), (1, 1e-6), (25, 1e-8), (4, 1e-7), (0.3, 1e-8)])
def test_truncation_radius(s, eps):
    assert truncation_radius(s, eps) == _direct_radius(s, eps)


def test_truncation_radius_values():
    assert truncation_radius(0, 1e-8) == 0
    assert truncation_radius(1, 1e-6) == 7
    assert truncation_radius(25, 1e-8) == 31
    with pytest.raises(InvalidParameterError):
        truncation_radius(1, 0)


@pytest.mark.parametrize("s", [0.5, 2.0, 9.0])
def test_kernel_structure(s):
    g = DiscreteGaussian1D.make(s, 1e-8)
    half = g.half()
    np.testing.assert_array_equal(g.weights, g.weights[::-1])
    assert np.all(np.diff(half) <= 0) and half[-1] >= 0
    assert g.mass() == pytest.approx(1.0, abs=1e-15)
    raw = DiscreteGaussian1D.make(s, 1e-8, normalize=False)
    assert raw.mass() ** 2 > 1 - 1e-8


def test_smooth_examples():
    rng = np.random.default_rng(0)
    img = rng.normal(size=(20, 30))
    np.testing.assert_array_equal(smooth_2d(img, 0), img)
    np.testing.assert_allclose(smooth_2d(np.full((17, 23), 7.0), 4.0), 7.0, atol=1e-12)
    impulse = np.zeros((65, 65))
    impulse[32, 32] = 1.0
    centre = smooth_2d(impulse, 2.0)[32, 32]
    assert centre == pytest.approx(scaled_bessel_series(0, 2.0) ** 2, rel=1e-7)
    assert centre == pytest.approx(0.09518, abs=5e-6)
    with pytest.raises(InvalidParameterError):
        smooth_2d(np.zeros((0, 3)), 1.0)


def test_smooth_impulse_is_outer_product():
    impulse = np.zeros((41, 41))
    impulse[20, 20] = 1.0
    out = smooth_2d(impulse, 3.0, eps=1e-12)
    w = bessel_ratio_weights(3.0, 20)
    ref = np.outer(np.r_[w[:0:-1], w], np.r_[w[:0:-1], w])
    np.testing.assert_allclose(out, ref, atol=1e-11)


def test_dft_examples():
    assert dft_gaussian(0, 0, 3.0) == 1.0
    assert dft_gaussian(pi, 0, 1.0) == pytest.approx(exp(-2), rel=1e-15)
    assert dft_gaussian(pi, pi, 0.5) == pytest.approx(exp(-2), rel=1e-15)


@pytest.mark.parametrize("s", [0.5, 1.0, 4.0, 16.0])
@pytest.mark.parametrize("eps", [1e-6, 1e-8])
def test_dft_matches_closed_form(s, eps):
    g = DiscreteGaussian1D.make(s, eps)
    n = np.arange(-g.radius, g.radius + 1)
    theta = np.linspace(-pi, pi, 32, endpoint=False)
    dft = np.array([np.sum(g.weights * np.exp(-1j * n * th)) for th in theta])
    assert np.max(np.abs(dft - dft_gaussian_1d(theta, s))) < 2 * eps


def test_diffusion_forward_residuals():
    r4 = diffusion_check(4.0, 1e-4)
    assert r4 < 1e-5
    # at s=1 the forward-difference error is ds/2 * d2T/ds2 at the origin
    w = [scaled_bessel_series(n, 1.0) for n in range(3)]
    d1 = w[1] - w[0]
    d1b = (w[0] + w[2]) / 2 - w[1]
    second = 2 * (d1 ** 2 + w[0] * (d1b - d1))
    assert diffusion_check(1.0, 1e-4) == pytest.approx(0.5e-4 * abs(second), rel=1e-3)
    ratio = diffusion_check(1.0, 1e-2) / diffusion_check(1.0, 1e-4)
    assert 80 < ratio < 120


@pytest.mark.parametrize("s", [1.0, 4.0])
def test_diffusion_midpoint(s):
    assert diffusion_check(s, 1e-4, scheme="midpoint") < 1e-8


@pytest.mark.parametrize("s1, s2", [(0.5, 0.5), (1, 3), (2, 2)])
def test_semigroup(s1, s2):
    rng = np.random.default_rng(int(10 * s1 + s2))
    img = rng.uniform(size=(64, 64))
    two_step = smooth_2d(smooth_2d(img, s1), s2)
    assert np.max(np.abs(two_step - smooth_2d(img, s1 + s2))) < 5e-7


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), s=st.sampled_from([0.1, 0.5, 1.0, 4.0, 10.0]))
def test_no_new_extrema_1d(seed, s):
    x = np.random.default_rng(seed).uniform(size=128)
    y = smooth_1d(x, s)
    assert circular_extrema(mirror_period(y)) <= circular_extrema(mirror_period(x))


def test_s_from_degrees():
    assert s_from_degrees(0.5, 10) == 25.0
    assert s_from_degrees(0.6, 10) == pytest.approx(36.0, rel=1e-14)
    assert s_from_degrees(0, 40) == 0.0
    with pytest.raises(InvalidParameterError):
        s_from_degrees(1, 0)


def test_spatial_derivative():
    const = np.full((5, 6), 2.0)
    assert not spatial_derivative(const, "x1", 1).any()
    assert not spatial_derivative(const, "x2", 2).any()
    ramp = np.tile(np.arange(8.0), (5, 1))
    np.testing.assert_array_equal(spatial_derivative(ramp, "x1", 1)[:, 1:-1], 1.0)
    np.testing.assert_array_equal(spatial_derivative(ramp, "x2", 1), 0.0)
    assert spatial_derivative(np.array([0.0, 1.0, 0.0]), "x1", 2)[1] == -2.0
    with pytest.raises(TooSmallImageError):
        spatial_derivative(np.zeros((2, 5)), "x2", 1)


def test_i0_sanity():
    # the scaled weights include the exp(-s) factor
    assert bessel_ratio_weights(2.0, 0)[0] == pytest.approx(exp(-2) * i0(2.0), rel=1e-13)
