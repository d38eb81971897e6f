"""Discrete analogue of the Gaussian kernel over a 2-D pixel grid.

The 1-D kernel ``T(n; s) = exp(-s) I_n(s)`` is the fundamental solution of
the semi-discrete diffusion equation; the 2-D kernel is its outer product.
Smoothing is done by separable correlation with mirrored (whole-sample
symmetric) boundaries using a truncated kernel renormalised to unit sum.
"""
from dataclasses import dataclass
from math import ceil, sqrt

import numpy as np
from scipy.ndimage import correlate1d

from .errors import InvalidParameterError, TooSmallImageError

DEFAULT_EPS = 1e-8


def s_from_degrees(sigma_x: float, p: float) -> float:
    """Spatial variance in pixels**2 for a standard deviation in degrees."""
    if not sigma_x >= 0:
        raise InvalidParameterError(f"sigma_x must be >= 0, got {sigma_x}")
    if not p > 0:
        raise InvalidParameterError(f"pixels per degree must be > 0, got {p}")
    return p * p * sigma_x * sigma_x


def bessel_ratio_weights(s: float, N: int) -> np.ndarray:
    """``exp(-s) I_n(s)`` for n = 0..N.

    Miller's backward recurrence is run on the ratios
    ``r_n = I_n / I_{n-1} = s / (2n + s r_{n+1})``, which cannot overflow,
    and the result is normalised with ``I_0 + 2 sum_{n>=1} I_n = exp(s)``.
    """
    if not s >= 0:
        raise InvalidParameterError(f"variance s must be >= 0, got {s}")
    N = int(N)
    if N < 0:
        raise InvalidParameterError(f"radius must be >= 0, got {N}")
    out = np.zeros(N + 1)
    if s == 0:
        out[0] = 1.0
        return out
    # start far enough out that the neglected tail and the starting error vanish
    top = max(N, int(ceil(s + 12.0 * sqrt(s)))) + 40
    ratios = np.zeros(top + 2)
    r = 0.0
    for n in range(top, 0, -1):
        r = s / (2.0 * n + s * r)
        ratios[n] = r
    rel = np.cumprod(ratios[1:top + 1])  # I_n / I_0 for n = 1..top
    w0 = 1.0 / (1.0 + 2.0 * rel.sum())
    out[0] = w0
    m = min(N, top)
    out[1:m + 1] = w0 * rel[:m]
    return out


def truncation_radius(s: float, eps: float = DEFAULT_EPS) -> int:
    """Smallest N whose 1-D mass ``m`` over ``|n| <= N`` has ``m**2 > 1 - eps``."""
    if not 0 < eps < 1:
        raise InvalidParameterError(f"eps must lie in (0, 1), got {eps}")
    if not s >= 0:
        raise InvalidParameterError(f"variance s must be >= 0, got {s}")
    guess = int(ceil(s + 12.0 * sqrt(s))) + 40
    w = bessel_ratio_weights(s, guess)
    mass = w[0] + 2.0 * np.concatenate([[0.0], np.cumsum(w[1:])])
    hit = np.nonzero(mass * mass > 1.0 - eps)[0]
    if hit.size == 0:
        return guess
    return int(hit[0])


@dataclass(frozen=True)
class DiscreteGaussian1D:
    """Truncated 1-D discrete Gaussian.

    ``weights`` holds the full symmetric kernel, ``2*radius + 1`` taps,
    renormalised to unit sum when ``normalize`` is set.
    """

    s: float
    radius: int
    weights: np.ndarray

    @classmethod
    def make(cls, s: float, eps: float = DEFAULT_EPS, radius: int | None = None,
             normalize: bool = True) -> "DiscreteGaussian1D":
        N = truncation_radius(s, eps) if radius is None else int(radius)
        half = bessel_ratio_weights(s, N)
        full = np.concatenate([half[:0:-1], half])
        if normalize:
            full = full / full.sum()
        return cls(float(s), N, full)

    def half(self) -> np.ndarray:
        return self.weights[self.radius:]

    def mass(self) -> float:
        return float(self.weights.sum())


def smooth_1d(signal, s: float, eps: float = DEFAULT_EPS, axis: int = -1) -> np.ndarray:
    signal = np.asarray(signal, dtype=float)
    if s == 0:
        return signal.copy()
    kernel = DiscreteGaussian1D.make(s, eps)
    return correlate1d(signal, kernel.weights, axis=axis, mode="mirror")


def smooth_2d(image, s: float, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Separable discrete Gaussian smoothing of every spatial axis.

    Also accepts 1-D signals, which are smoothed along their only axis.
    """
    image = np.asarray(image, dtype=float)
    if image.size == 0:
        raise InvalidParameterError("image is empty")
    if not s >= 0:
        raise InvalidParameterError(f"variance s must be >= 0, got {s}")
    if s == 0:
        return image.copy()
    kernel = DiscreteGaussian1D.make(s, eps).weights
    out = image
    for axis in range(image.ndim):
        out = correlate1d(out, kernel, axis=axis, mode="mirror")
    return out


def dft_gaussian(theta1: float, theta2: float, s: float) -> float:
    return float(np.exp(-2.0 * s * (np.sin(theta1 / 2) ** 2 + np.sin(theta2 / 2) ** 2)))


def dft_gaussian_1d(theta, s: float):
    return np.exp(-2.0 * s * np.sin(np.asarray(theta) / 2) ** 2)


def kernel_2d(s: float, radius: int) -> np.ndarray:
    """Untruncated-in-value 2-D kernel ``exp(-2s) I_n1(s) I_n2(s)`` on a square support."""
    half = bessel_ratio_weights(s, radius)
    full = np.concatenate([half[:0:-1], half])
    return np.outer(full, full)


def five_point_laplacian(f: np.ndarray) -> np.ndarray:
    """Five-point Laplacian with zero values outside the array."""
    p = np.pad(f, 1)
    return p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:] - 4.0 * f


def diffusion_check(s: float, ds: float, scheme: str = "forward") -> float:
    """Max residual of the semi-discrete diffusion equation on the 2-D kernel.

    Compares the difference quotient ``(T(s + ds) - T(s)) / ds`` against
    half the five-point Laplacian of ``T(s)`` (``scheme="forward"``) or of
    ``T(s + ds/2)`` (``scheme="midpoint"``, second order in ``ds``).
    """
    if not s > 0 or not ds > 0:
        raise InvalidParameterError("s and ds must be > 0")
    if scheme not in ("forward", "midpoint"):
        raise InvalidParameterError(f"unknown scheme {scheme!r}")
    radius = truncation_radius(s + ds, 1e-15) + 2
    T0 = kernel_2d(s, radius)
    T1 = kernel_2d(s + ds, radius)
    Tl = T0 if scheme == "forward" else kernel_2d(s + ds / 2, radius)
    residual = (T1 - T0) / ds - 0.5 * five_point_laplacian(Tl)
    return float(np.max(np.abs(residual)))


DX = np.array([-0.5, 0.0, 0.5])
DXX = np.array([1.0, -2.0, 1.0])


def spatial_derivative(image, axis, order: int) -> np.ndarray:
    """Centered difference along ``x1`` (columns) or ``x2`` (rows), mirrored borders.

    ``axis`` may be given as ``"x1"``/``"x2"`` or as an array axis index.
    """
    image = np.asarray(image, dtype=float)
    if axis in ("x1", "x"):
        axis = image.ndim - 1
    elif axis in ("x2", "y"):
        axis = image.ndim - 2
    if order == 1:
        stencil = DX
    elif order == 2:
        stencil = DXX
    else:
        raise InvalidParameterError(f"spatial derivative order must be 1 or 2, got {order}")
    if image.shape[axis] < 3:
        raise TooSmallImageError(f"image extent {image.shape[axis]} < 3 along axis {axis}")
    return correlate1d(image, stencil, axis=axis, mode="mirror")
