"""Time-recursive discrete temporal scale space.

Each stage is the first-order recursive filter

    y(t) = y(t-1) + (x(t) - y(t-1)) / (1 + mu)

whose impulse response has mean ``mu`` and variance ``mu**2 + mu``.  The
per-stage ``mu`` is obtained by inverting that variance, so the composed
discrete variance equals the target level exactly.  The K stage outputs
are the only memory of the past.
"""
from dataclasses import dataclass
import numpy as np

from .errors import InsufficientHistoryError, InvalidParameterError, ShapeMismatchError
from .scale_distribution import ScaleDistribution


def tau_from_seconds(sigma_t: float, r: float) -> float:
    """Temporal variance in frames**2 for a standard deviation in seconds."""
    if not sigma_t >= 0:
        raise InvalidParameterError(f"sigma_t must be >= 0, got {sigma_t}")
    if not r > 0:
        raise InvalidParameterError(f"frame rate must be > 0, got {r}")
    return r * r * sigma_t * sigma_t


def mu_from_variance_increment(delta_tau) -> np.ndarray:
    """Discrete time constant with ``mu**2 + mu == delta_tau``."""
    delta_tau = np.asarray(delta_tau, dtype=float)
    if np.any(delta_tau < 0):
        raise InvalidParameterError("variance increments must be >= 0")
    # (sqrt(1 + 4d) - 1)/2 rewritten to avoid cancellation for small d
    return 2.0 * delta_tau / (np.sqrt(1.0 + 4.0 * delta_tau) + 1.0)


@dataclass(frozen=True)
class DiscreteCascadeSpec:
    """Per-stage discrete time constants and the cumulative variances they reach."""

    mu_discrete: tuple
    tau_levels: tuple

    def __post_init__(self):
        if len(self.mu_discrete) == 0:
            raise InvalidParameterError("cascade needs at least one stage")
        if len(self.mu_discrete) != len(self.tau_levels):
            raise InvalidParameterError("mu_discrete and tau_levels differ in length")
        if any(m < 0 for m in self.mu_discrete):
            raise InvalidParameterError("discrete time constants must be >= 0")

    @classmethod
    def from_mu(cls, mu) -> "DiscreteCascadeSpec":
        mu = tuple(float(m) for m in np.atleast_1d(mu))
        levels = np.cumsum([m * m + m for m in mu])
        return cls(mu, tuple(float(v) for v in levels))

    @property
    def K(self) -> int:
        return len(self.mu_discrete)

    def variances(self) -> np.ndarray:
        mu = np.asarray(self.mu_discrete)
        return np.cumsum(mu * mu + mu)

    def means(self) -> np.ndarray:
        return np.cumsum(self.mu_discrete)


def build_cascade(dist: ScaleDistribution) -> DiscreteCascadeSpec:
    """Discrete cascade whose cumulative variances hit the distribution's levels.

    ``dist.tau_max`` must already be expressed in samples**2.
    """
    levels = dist.levels()
    mu = mu_from_variance_increment(np.diff(levels, prepend=0.0))
    return DiscreteCascadeSpec(tuple(float(m) for m in mu),
                               tuple(float(v) for v in levels))


class RecursiveCascade:
    """Streaming state of a recursive filter cascade.

    Holds one buffer per stage, shaped like the input frames.  ``prime``
    initialises every level with the first frame instead of zero.
    """

    def __init__(self, spec: DiscreteCascadeSpec, shape=(), prime: bool = False):
        self.spec = spec
        self.shape = tuple(shape)
        self.gains = 1.0 / (1.0 + np.asarray(spec.mu_discrete, dtype=float))
        self.levels = np.zeros((spec.K,) + self.shape)
        self.prime = prime
        self.count = 0

    def reset(self) -> None:
        self.levels[...] = 0.0
        self.count = 0

    def step(self, frame) -> np.ndarray:
        """Advance one sample; returns all K levels (a view on the state)."""
        x = np.asarray(frame, dtype=np.float64)
        if x.shape != self.shape:
            raise ShapeMismatchError(f"frame shape {x.shape} != state shape {self.shape}")
        if self.prime and self.count == 0:
            self.levels[...] = x
        else:
            levels = self.levels
            for k, g in enumerate(self.gains):
                levels[k] += g * (x - levels[k])
                x = levels[k]
        self.count += 1
        return self.levels


def step(state: RecursiveCascade, frame) -> np.ndarray:
    return state.step(frame)


def impulse_response(spec: DiscreteCascadeSpec, n: int) -> np.ndarray:
    """Responses of all K stages to a unit impulse, shape (K, n)."""
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"n must be an integer >= 1, got {n}")
    state = RecursiveCascade(spec)
    out = np.empty((spec.K, int(n)))
    for i in range(int(n)):
        out[:, i] = state.step(1.0 if i == 0 else 0.0)
    return out


def temporal_derivative(levels, order: int, axis: int = 0) -> np.ndarray:
    """Backward differences over time, defined from index ``order`` onwards."""
    if order not in (1, 2):
        raise InvalidParameterError(f"temporal derivative order must be 1 or 2, got {order}")
    y = np.asarray(levels, dtype=float)
    if y.shape[axis] < order + 1:
        raise InsufficientHistoryError(
            f"need at least {order + 1} samples for a derivative of order {order}")
    return np.diff(y, n=order, axis=axis)


def sample_moments(sequence) -> tuple[float, float]:
    """Mean and variance of a non-negative sequence treated as a distribution."""
    w = np.asarray(sequence, dtype=float)
    n = np.arange(w.size)
    total = w.sum()
    mean = (n * w).sum() / total
    return float(mean), float(((n - mean) ** 2 * w).sum() / total)


def count_local_extrema(signal, pad_zeros: bool = False) -> int:
    """Number of strict sign changes in the first difference."""
    x = np.asarray(signal, dtype=float)
    if pad_zeros:
        x = np.concatenate([[0.0], x, [0.0]])
    d = np.diff(x)
    s = np.sign(d[d != 0])
    return int(np.count_nonzero(s[1:] != s[:-1]))


__all__ = [
    "DiscreteCascadeSpec",
    "RecursiveCascade",
    "build_cascade",
    "count_local_extrema",
    "impulse_response",
    "mu_from_variance_increment",
    "sample_moments",
    "step",
    "tau_from_seconds",
    "temporal_derivative",
]

