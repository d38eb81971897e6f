"""Placement of the intermediate temporal scale levels.

A cascade of K first-order integrators reaches the temporal variance
``tau_max`` through K intermediate levels ``tau_1 < ... < tau_K``.  The
levels are either spaced uniformly, ``tau_k = k/K tau_max``, or
geometrically with ratio ``c**2`` between neighbours, which is a uniform
spacing in effective temporal scale ``log tau``.

The time constants returned here have continuous semantics,
``mu_k = sqrt(tau_k - tau_{k-1})`` with ``tau_0 = 0``.  The discrete
counterparts live in :mod:`timecausal.discrete_temporal`.
"""
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import InvalidParameterError

UNIFORM = "uniform"
LOGARITHMIC = "logarithmic"


def _check_common(K: int, tau_max: float) -> None:
    if int(K) != K or K < 1:
        raise InvalidParameterError(f"K must be an integer >= 1, got {K}")
    if not tau_max > 0:
        raise InvalidParameterError(f"tau_max must be > 0, got {tau_max}")


def _check_c(c: float) -> None:
    if not c > 1:
        raise InvalidParameterError(f"distribution parameter c must be > 1, got {c}")


def log_scale_levels(K: int, c: float, tau_max: float) -> np.ndarray:
    """Geometrically spaced levels ``c**(2(k-K)) * tau_max`` for k = 1..K."""
    _check_common(K, tau_max)
    _check_c(c)
    k = np.arange(1, K + 1)
    return tau_max * float(c) ** (2.0 * (k - K))


def uniform_scale_levels(K: int, tau_max: float) -> np.ndarray:
    _check_common(K, tau_max)
    return tau_max * np.arange(1, K + 1) / K


def log_time_constants(K: int, c: float, tau_max: float) -> np.ndarray:
    """Time constants of the integrators realising the logarithmic levels.

    Closed form: ``mu_1 = c**(1-K) sqrt(tau_max)`` and
    ``mu_k = c**(k-K-1) sqrt(c**2 - 1) sqrt(tau_max)`` for k >= 2.
    """
    _check_common(K, tau_max)
    _check_c(c)
    c = float(c)
    root = sqrt(tau_max)
    mu = np.empty(K)
    mu[0] = c ** (1 - K) * root
    k = np.arange(2, K + 1)
    mu[1:] = c ** (k - K - 1.0) * sqrt(c * c - 1.0) * root
    return mu


def uniform_time_constants(K: int, tau_max: float) -> np.ndarray:
    _check_common(K, tau_max)
    return np.full(K, sqrt(tau_max / K))


def distribution_param_from_range(tau_min: float, tau_max: float, K: int) -> float:
    """Ratio c such that the logarithmic levels start exactly at ``tau_min``."""
    if int(K) != K or K < 2:
        raise InvalidParameterError(f"K must be an integer >= 2, got {K}")
    if not 0 < tau_min < tau_max:
        raise InvalidParameterError(
            f"need 0 < tau_min < tau_max, got tau_min={tau_min}, tau_max={tau_max}")
    return (tau_max / tau_min) ** (1.0 / (2 * (K - 1)))


@dataclass(frozen=True)
class ScaleDistribution:
    """How K temporal scale levels are placed below ``tau_max``.

    ``c`` is only meaningful for the logarithmic kind and must be left as
    ``None`` for the uniform one.
    """

    kind: str
    K: int
    tau_max: float
    c: float | None = None

    def __post_init__(self):
        _check_common(self.K, self.tau_max)
        if self.kind == LOGARITHMIC:
            if self.c is None:
                raise InvalidParameterError("logarithmic distribution needs c")
            _check_c(self.c)
        elif self.kind == UNIFORM:
            if self.c is not None:
                raise InvalidParameterError("uniform distribution takes no c")
        else:
            raise InvalidParameterError(f"unknown distribution kind {self.kind!r}")

    @classmethod
    def uniform(cls, K: int, tau_max: float) -> "ScaleDistribution":
        return cls(UNIFORM, K, tau_max)

    @classmethod
    def logarithmic(cls, K: int, c: float, tau_max: float) -> "ScaleDistribution":
        return cls(LOGARITHMIC, K, tau_max, c)

    @classmethod
    def from_range(cls, tau_min: float, tau_max: float, K: int) -> "ScaleDistribution":
        return cls(LOGARITHMIC, K, tau_max,
                   distribution_param_from_range(tau_min, tau_max, K))

    def with_tau_max(self, tau_max: float) -> "ScaleDistribution":
        return ScaleDistribution(self.kind, self.K, tau_max, self.c)

    def levels(self) -> np.ndarray:
        if self.kind == UNIFORM:
            return uniform_scale_levels(self.K, self.tau_max)
        return log_scale_levels(self.K, self.c, self.tau_max)

    def level_increments(self) -> np.ndarray:
        """``tau_k - tau_{k-1}`` with ``tau_0 = 0``."""
        return np.diff(self.levels(), prepend=0.0)

    def time_constants(self) -> np.ndarray:
        if self.kind == UNIFORM:
            return uniform_time_constants(self.K, self.tau_max)
        return log_time_constants(self.K, self.c, self.tau_max)

    def describe(self) -> str:
        if self.kind == UNIFORM:
            return f"uniform(K={self.K}, tau_max={self.tau_max:g})"
        return f"logarithmic(K={self.K}, c={self.c:g}, tau_max={self.tau_max:g})"
