"""Independent reference computations used only by the tests."""
from math import exp, lgamma, log

import numpy as np
from scipy.signal import fftconvolve


def trapezoid_convolve(f: np.ndarray, g: np.ndarray, dt: float) -> np.ndarray:
    """Causal convolution of two sampled densities, trapezoid rule on [0, t]."""
    n = len(f)
    full = fftconvolve(f, g)[:n]
    return dt * (full - 0.5 * f[0] * g - 0.5 * f * g[0])


def brute_force_cascade(mu, t_end: float, dt: float):
    """Cascade kernel by repeated numerical convolution of truncated exponentials."""
    t = np.arange(0.0, t_end + dt / 2, dt)
    h = np.exp(-t / mu[0]) / mu[0]
    for m in mu[1:]:
        h = trapezoid_convolve(h, np.exp(-t / m) / m, dt)
    return t, h


def scaled_bessel_series(n: int, s: float, terms: int = 80) -> float:
    """``exp(-s) I_n(s)`` from the power series."""
    if s == 0:
        return 1.0 if n == 0 else 0.0
    log_half = log(s / 2.0)
    return sum(exp((2 * k + n) * log_half - lgamma(k + 1) - lgamma(k + n + 1) - s)
               for k in range(terms))


def geometric_cascade_direct(mu, x):
    """Recursive filter cascade run sample by sample with plain Python floats."""
    out = list(map(float, x))
    for m in mu:
        y, prev = [], 0.0
        for v in out:
            prev = prev + (v - prev) / (1.0 + m)
            y.append(prev)
        out = y
    return np.array(out)


def circular_extrema(x: np.ndarray) -> int:
    d = np.diff(np.concatenate([x, x[:1]]))
    s = np.sign(d[d != 0])
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s != np.roll(s, 1)))


def mirror_period(x: np.ndarray) -> np.ndarray:
    """One period of the whole-sample symmetric extension."""
    return np.concatenate([x, x[-2:0:-1]])
