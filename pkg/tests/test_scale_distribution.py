from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timecausal.errors import InvalidParameterError
from timecausal.scale_distribution import (
    ScaleDistribution,
    distribution_param_from_range,
    log_scale_levels,
    log_time_constants,
    uniform_time_constants,
)

Ks = st.integers(min_value=1, max_value=12)
cs = st.floats(min_value=1.01, max_value=4.0)
taus = st.floats(min_value=1e-3, max_value=1e4)


def test_log_levels_examples():
    np.testing.assert_allclose(log_scale_levels(3, 2, 16), [1, 4, 16], rtol=1e-15)
    np.testing.assert_allclose(log_scale_levels(1, sqrt(2), 5), [5])
    np.testing.assert_allclose(log_scale_levels(4, sqrt(2), 1), [0.125, 0.25, 0.5, 1.0],
                               rtol=1e-14)


@pytest.mark.parametrize("K, c, tau", [(0, 2, 1), (3, 1.0, 1), (3, 0.5, 1), (3, 2, 0), (3, 2, -1)])
def test_log_levels_reject(K, c, tau):
    with pytest.raises(InvalidParameterError):
        log_scale_levels(K, c, tau)


def test_log_time_constants_examples():
    np.testing.assert_allclose(log_time_constants(2, sqrt(2), 1), [sqrt(0.5), sqrt(0.5)],
                               rtol=1e-14)
    np.testing.assert_allclose(log_time_constants(2, 2, 1), [0.5, sqrt(0.75)], rtol=1e-14)
    np.testing.assert_allclose(log_time_constants(1, 2, 4), [2.0])
    # K=2, c=sqrt(2): mean 1.414 as tabulated
    assert round(sum(log_time_constants(2, sqrt(2), 1)), 3) == 1.414


def test_uniform_time_constants_examples():
    np.testing.assert_array_equal(uniform_time_constants(4, 1), [0.5] * 4)
    np.testing.assert_array_equal(uniform_time_constants(1, 9), [3.0])
    mu = uniform_time_constants(7, 1)
    np.testing.assert_allclose(mu, sqrt(1 / 7))
    assert round(mu.sum(), 3) == 2.646


def test_param_from_range_examples():
    assert distribution_param_from_range(1, 16, 3) == pytest.approx(2.0, rel=1e-15)
    c = distribution_param_from_range(0.5, 8, 5)
    assert c == pytest.approx(sqrt(2), rel=1e-14)
    assert log_scale_levels(5, c, 8)[0] == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(InvalidParameterError):
        distribution_param_from_range(4, 4, 3)
    with pytest.raises(InvalidParameterError):
        distribution_param_from_range(1, 4, 1)


@given(K=Ks, c=cs, tau=taus)
def test_variances_add_up_log(K, c, tau):
    mu = log_time_constants(K, c, tau)
    assert np.all(mu > 0)
    assert np.sum(mu ** 2) == pytest.approx(tau, rel=1e-12)


@given(K=Ks, tau=taus)
def test_variances_add_up_uniform(K, tau):
    assert np.sum(uniform_time_constants(K, tau) ** 2) == pytest.approx(tau, rel=1e-12)


@given(K=st.integers(2, 12), c=cs, tau=taus)
def test_levels_geometric(K, c, tau):
    lv = log_scale_levels(K, c, tau)
    assert np.all(np.diff(lv) > 0)
    assert lv[-1] == tau
    np.testing.assert_allclose(lv[1:] / lv[:-1], c * c, rtol=1e-12)


@given(K=st.integers(2, 12), tau_min=st.floats(1e-3, 10), ratio=st.floats(1.01, 1e4))
def test_range_round_trip(K, tau_min, ratio):
    tau_max = tau_min * ratio
    c = distribution_param_from_range(tau_min, tau_max, K)
    assert log_scale_levels(K, c, tau_max)[0] == pytest.approx(tau_min, rel=1e-12)


@settings(max_examples=30)
@given(K=Ks, tau=taus)
def test_log_collapses_to_single_stage_as_c_tends_to_one(K, tau):
    # every level tends to tau_max, so only the first stage keeps a time constant
    mu = log_time_constants(K, 1 + 1e-6, tau)
    assert mu[0] == pytest.approx(sqrt(tau), rel=1e-4)
    assert np.all(mu[1:] < 2e-3 * sqrt(tau))


def test_distribution_object():
    d = ScaleDistribution.logarithmic(3, 2, 16)
    np.testing.assert_allclose(d.levels(), [1, 4, 16])
    np.testing.assert_allclose(d.level_increments(), [1, 3, 12])
    assert ScaleDistribution.from_range(1, 16, 3).c == pytest.approx(2)
    assert ScaleDistribution.uniform(4, 1).time_constants().tolist() == [0.5] * 4
    with pytest.raises(InvalidParameterError):
        ScaleDistribution("uniform", 3, 1.0, c=2.0)
    with pytest.raises(InvalidParameterError):
        ScaleDistribution("gaussian", 3, 1.0)
    with pytest.raises(InvalidParameterError):
        ScaleDistribution.logarithmic(3, 1.0, 1.0)
