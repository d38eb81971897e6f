"""Temporal delays of time-causal kernel cascades.

Two delay measures are provided: the temporal mean ``sum(mu_k)`` and the
position of the kernel maximum.  Both are expressed for a given temporal
variance ``tau``; tabulated values use ``tau = 1``, i.e. units of
``sqrt(tau)``.
"""
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from math import sqrt

import numpy as np

from .errors import InvalidParameterError, NoMaximumFoundError
from .scale_distribution import ScaleDistribution, log_time_constants, uniform_time_constants
from .temporal_kernels import KernelCascade

INVPHI = (sqrt(5.0) - 1.0) / 2.0


def _check(K: int, tau: float, K_min: int = 1) -> None:
    if int(K) != K or K < K_min:
        raise InvalidParameterError(f"K must be an integer >= {K_min}, got {K}")
    if not tau > 0:
        raise InvalidParameterError(f"tau must be > 0, got {tau}")


def mean_delay_uniform(K: int, tau: float) -> float:
    _check(K, tau)
    return sqrt(K * tau)


def mean_delay_log(K: int, c: float, tau: float) -> float:
    _check(K, tau, K_min=2)
    if not c > 1:
        raise InvalidParameterError(f"c must be > 1, got {c}")
    r = sqrt(c * c - 1.0)
    return c ** -K * (c * c - (r + 1.0) * c + r * c ** K) / (c - 1.0) * sqrt(tau)


def mean_delay_log_limit(c: float, tau: float) -> float:
    if not c > 1:
        raise InvalidParameterError(f"c must be > 1, got {c}")
    if not tau > 0:
        raise InvalidParameterError(f"tau must be > 0, got {tau}")
    return sqrt(c * c - 1.0) / (c - 1.0) * sqrt(tau)


def tmax_uniform(K: int, tau: float) -> float:
    _check(K, tau)
    return (K - 1) / sqrt(K) * sqrt(tau)


def golden_section_max(f, lo: float, hi: float, xtol: float) -> float:
    """Maximiser of a unimodal ``f`` on ``[lo, hi]`` to within ``xtol``."""
    a, b = lo, hi
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > xtol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = f(x1)
    return 0.5 * (a + b)


def tmax_numeric(mu) -> float:
    """Position of the maximum of the composed kernel.

    The cascade kernel is log-concave, hence unimodal, and its mode lies
    below the mean, so the search is confined to ``[0, sum(mu)]``.
    """
    kernel = KernelCascade(mu)
    if kernel.K == 1:
        return 0.0
    mean, var = kernel.mean_variance()
    return golden_section_max(kernel, 0.0, mean, 1e-7 * sqrt(var))


def tmax_log(K: int, c: float, tau: float) -> float:
    return tmax_numeric(log_time_constants(K, c, tau))


@dataclass(frozen=True)
class DelayReport:
    K: int
    distribution: ScaleDistribution
    mean_delay: float
    tmax_delay: float


def delay_report(dist: ScaleDistribution) -> DelayReport:
    if dist.kind == "uniform":
        mean = mean_delay_uniform(dist.K, dist.tau_max)
        tmax = tmax_uniform(dist.K, dist.tau_max)
    else:
        mu = dist.time_constants()
        mean = float(np.sum(mu))
        tmax = tmax_numeric(mu)
    return DelayReport(dist.K, dist, mean, tmax)


def round_half_up(x: float, places: int = 3) -> str:
    q = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


@dataclass
class DelayTables:
    K_values: list
    c_values: list
    mean: np.ndarray
    tmax: np.ndarray

    def column_labels(self) -> list[str]:
        return ["uniform"] + [f"c={c:.6g}" for c in self.c_values]

    def rows(self, which: str) -> list[list[str]]:
        table = self.mean if which == "mean" else self.tmax
        return [[str(K)] + [round_half_up(v) for v in row]
                for K, row in zip(self.K_values, table)]


def render_delay_tables(K_range, c_list, tau: float = 1.0) -> DelayTables:
    """Mean-delay and maximum-delay tables, one row per K.

    Column 0 is the uniform distribution, then one column per ``c``.
    """
    K_values = [int(K) for K in K_range]
    c_values = [float(c) for c in c_list]
    mean = np.empty((len(K_values), 1 + len(c_values)))
    tmax = np.empty_like(mean)
    for i, K in enumerate(K_values):
        mean[i, 0] = mean_delay_uniform(K, tau)
        tmax[i, 0] = tmax_uniform(K, tau)
        for j, c in enumerate(c_values, start=1):
            if K == 1:
                mean[i, j] = sqrt(tau)
                tmax[i, j] = 0.0
            else:
                mean[i, j] = mean_delay_log(K, c, tau)
                tmax[i, j] = tmax_log(K, c, tau)
    return DelayTables(K_values, c_values, mean, tmax)


def step_response_delay(cascade, horizon: int) -> float:
    """Delay of the first-order temporal derivative peak after a step onset.

    A unit step is fed through the discrete recursive cascade, the backward
    difference of the top level is taken and its maximum is located with
    parabolic sub-sample refinement.  The result is in samples.
    """
    from .discrete_temporal import RecursiveCascade

    horizon = int(horizon)
    if horizon < 3:
        raise InvalidParameterError("horizon must be at least 3 samples")
    filt = RecursiveCascade(cascade, shape=())
    top = np.empty(horizon)
    for n in range(horizon):
        top[n] = filt.step(1.0)[-1]
    response = np.diff(top, prepend=0.0)
    i = int(np.argmax(response))
    if i >= horizon - 1:
        raise NoMaximumFoundError("derivative response still rising at the horizon")
    if i == 0:
        return 0.0
    y0, y1, y2 = response[i - 1], response[i], response[i + 1]
    curv = y0 - 2.0 * y1 + y2
    return i + (0.5 * (y0 - y2) / curv if curv < 0 else 0.0)
