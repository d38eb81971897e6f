"""Separable and velocity-adapted spatio-temporal receptive fields on video.

Frames are smoothed with the discrete Gaussian, pushed through the
recursive temporal cascade and differentiated with small difference
stencils.  For a non-zero image velocity the frames are first warped into
co-moving coordinates, processed by the same separable pipeline and the
resulting maps unwarped again.

Array convention: the last axis is x1 (columns), the one before it x2
(rows).  1-D frames have only x1.
"""
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import shift as ndi_shift

from .discrete_spatial import DEFAULT_EPS, s_from_degrees, smooth_2d, spatial_derivative
from .discrete_temporal import (
    DiscreteCascadeSpec,
    RecursiveCascade,
    build_cascade,
    tau_from_seconds,
)
from .errors import InvalidParameterError, ShapeMismatchError
from .scale_distribution import ScaleDistribution

_OPERATOR = re.compile(r"^L(x*)(y*)(t*)$")


@dataclass(frozen=True)
class Operator:
    """Derivative orders of one receptive field: x1, x2 and time."""

    ax1: int = 0
    ax2: int = 0
    t: int = 0

    def __post_init__(self):
        if min(self.ax1, self.ax2, self.t) < 0:
            raise InvalidParameterError("derivative orders must be >= 0")
        if self.ax1 + self.ax2 > 3:
            raise InvalidParameterError("total spatial order must be <= 3")
        if self.t > 2:
            raise InvalidParameterError("temporal order must be 0, 1 or 2")

    @classmethod
    def parse(cls, name: str) -> "Operator":
        m = _OPERATOR.match(name.strip())
        if not m:
            raise InvalidParameterError(f"cannot parse operator {name!r}; expected e.g. L, Lx, Lxxt")
        return cls(len(m.group(1)), len(m.group(2)), len(m.group(3)))

    @property
    def name(self) -> str:
        return "L" + "x" * self.ax1 + "y" * self.ax2 + "t" * self.t


def _apply_spatial(image: np.ndarray, order: int, axis: str) -> np.ndarray:
    if order == 0:
        return image
    if order == 1:
        return spatial_derivative(image, axis, 1)
    if order == 2:
        return spatial_derivative(image, axis, 2)
    return spatial_derivative(spatial_derivative(image, axis, 2), axis, 1)


def warp_frame(frame, displacement, method: str = "linear") -> np.ndarray:
    """Translate ``frame`` by ``displacement = (d1, d2)`` pixels.

    ``out(x) = frame(x - d)``; samples falling outside are mirror-extended.
    ``method`` is ``"linear"`` or ``"cubic"`` (cubic B-spline).
    """
    frame = np.asarray(frame, dtype=float)
    d1, d2 = (tuple(displacement) + (0.0,))[:2]
    if d1 == 0 and d2 == 0:
        return frame.copy()
    order = {"linear": 1, "cubic": 3}.get(method)
    if order is None:
        raise InvalidParameterError(f"unknown interpolation {method!r}")
    if frame.ndim == 1:
        shifts = (d1,)
    else:
        shifts = (0.0,) * (frame.ndim - 2) + (d2, d1)
    return ndi_shift(frame, shifts, order=order, mode="mirror")


@dataclass
class FeatureFrame:
    maps: dict
    frame_index: int
    scale_index: int
    tau: float
    reliable: bool = True


class SpatioTemporalEngine:
    """Streaming receptive-field filter bank for one video stream.

    Parameters
    ----------
    s : spatial variance in pixels**2
    cascade : discrete temporal cascade (variances in frames**2)
    operators : receptive fields to compute, as names (``"Lxt"``) or
        :class:`Operator` instances
    levels : indices of the temporal scale levels to report; the top level
        by default
    velocity : image velocity ``(v1, v2)`` in pixels per frame
    """

    def __init__(self, s: float, cascade: DiscreteCascadeSpec, operators=("L",),
                 levels=None, velocity=(0.0, 0.0), interpolation: str = "linear",
                 eps: float = DEFAULT_EPS, prime: bool = False):
        if not s >= 0:
            raise InvalidParameterError(f"spatial variance must be >= 0, got {s}")
        self.s = float(s)
        self.cascade = cascade
        self.operators = [op if isinstance(op, Operator) else Operator.parse(op)
                          for op in operators]
        if not self.operators:
            raise InvalidParameterError("at least one operator is required")
        self.levels = [cascade.K - 1] if levels is None else [int(k) for k in levels]
        for k in self.levels:
            if not 0 <= k < cascade.K:
                raise InvalidParameterError(f"level index {k} outside 0..{cascade.K - 1}")
        self.velocity = tuple(float(v) for v in (tuple(velocity) + (0.0,))[:2])
        self.interpolation = interpolation
        self.eps = eps
        self.prime = prime
        self.max_t_order = max(op.t for op in self.operators)
        self.warmup = max(self.max_t_order, 2)
        self.shape = None
        self.frame_index = 0
        self._state = None

    @property
    def adapted(self) -> bool:
        return self.velocity != (0.0, 0.0)

    def _init_state(self, shape) -> None:
        self.shape = shape
        self._state = RecursiveCascade(self.cascade, shape, prime=self.prime)
        n = len(self.levels)
        self._prev = np.zeros((n,) + shape)
        self._prev_dt = np.zeros((n,) + shape)

    def reset(self) -> None:
        self.shape = None
        self._state = None
        self.frame_index = 0

    def _displacement(self, sign: float):
        t = self.frame_index
        return (sign * self.velocity[0] * t, sign * self.velocity[1] * t)

    def process_frame(self, frame) -> list[FeatureFrame]:
        """Consume one frame; returns one :class:`FeatureFrame` per reported level."""
        frame = np.asarray(frame, dtype=np.float64)
        if frame.ndim not in (1, 2):
            raise ShapeMismatchError("frames must be 1-D or 2-D arrays")
        if self.shape is None:
            self._init_state(frame.shape)
        elif frame.shape != self.shape:
            raise ShapeMismatchError(f"frame shape {frame.shape} != stream shape {self.shape}")

        if self.adapted:
            frame = warp_frame(frame, self._displacement(-1.0), self.interpolation)
        smoothed = smooth_2d(frame, self.s, self.eps) if self.s > 0 else frame
        all_levels = self._state.step(smoothed)

        out = []
        for i, k in enumerate(self.levels):
            L = all_levels[k]
            if self.prime and self.frame_index == 0:
                # primed stream: treat the first frame as having been there forever
                self._prev[i] = L
            Lt = L - self._prev[i]
            temporal = {0: L, 1: Lt}
            if self.max_t_order >= 2:
                temporal[2] = Lt - self._prev_dt[i]
                self._prev_dt[i] = Lt
            maps = {}
            for op in self.operators:
                m = temporal[op.t]
                if frame.ndim == 2:
                    m = _apply_spatial(m, op.ax2, "x2")
                elif op.ax2:
                    raise InvalidParameterError("x2 derivatives need 2-D frames")
                m = _apply_spatial(m, op.ax1, "x1")
                if self.adapted:
                    m = warp_frame(m, self._displacement(+1.0), self.interpolation)
                elif m is L:
                    m = m.copy()
                maps[op.name] = m
            self._prev[i] = L
            out.append(FeatureFrame(maps, self.frame_index, k, self.cascade.tau_levels[k],
                                    reliable=self.frame_index >= self.warmup))
        self.frame_index += 1
        return out

    def run(self, frames) -> list[list[FeatureFrame]]:
        return [self.process_frame(f) for f in frames]


def process_frame(engine: SpatioTemporalEngine, frame) -> list[FeatureFrame]:
    return engine.process_frame(frame)


def velocity_adapted_process(engine: SpatioTemporalEngine, frame, v) -> list[FeatureFrame]:
    """Process ``frame`` in coordinates moving with ``v`` pixels/frame.

    The velocity is fixed per engine; the first call pins it.
    """
    v = tuple(float(x) for x in (tuple(v) + (0.0,))[:2])
    if engine.frame_index == 0 and engine.shape is None:
        engine.velocity = v
    elif v != engine.velocity:
        raise InvalidParameterError("image velocity must stay constant over a stream")
    return engine.process_frame(frame)


def commute_check(frames, s: float, distribution: ScaleDistribution,
                  eps: float = DEFAULT_EPS) -> float:
    """Max difference between spatial-then-temporal and temporal-then-spatial."""
    frames = np.asarray(frames, dtype=float)
    spec = build_cascade(distribution)
    a = RecursiveCascade(spec, frames.shape[1:])
    b = RecursiveCascade(spec, frames.shape[1:])
    worst = 0.0
    for f in frames:
        la = a.step(smooth_2d(f, s, eps))
        lb = b.step(f)
        for k in range(spec.K):
            worst = max(worst, float(np.max(np.abs(la[k] - smooth_2d(lb[k], s, eps)))))
    return worst


@dataclass(frozen=True)
class ReceptiveFieldSpec:
    """Receptive field in physical units.

    ``sigma_x`` in degrees, ``sigma_t`` in seconds, ``v`` in degrees/ms,
    ``p`` pixels per degree and ``r`` frames per second.  The
    distribution's own ``tau_max`` is ignored and replaced by
    ``(r sigma_t)**2``.
    """

    spatial_order: tuple = (0, 0)
    temporal_order: int = 0
    sigma_x: float = 1.0
    sigma_t: float = 0.05
    v: tuple = (0.0, 0.0)
    distribution: ScaleDistribution = field(
        default_factory=lambda: ScaleDistribution.logarithmic(7, 2 ** 0.5, 1.0))
    p: float = 10.0
    r: float = 1000.0 / 16.0

    def __post_init__(self):
        Operator(self.spatial_order[0], self.spatial_order[1], self.temporal_order)
        if not self.tau > 0:
            raise InvalidParameterError("temporal scale must be > 0")

    @property
    def s(self) -> float:
        return s_from_degrees(self.sigma_x, self.p)

    @property
    def tau(self) -> float:
        return tau_from_seconds(self.sigma_t, self.r)

    @property
    def operator(self) -> Operator:
        return Operator(self.spatial_order[0], self.spatial_order[1], self.temporal_order)

    def velocity_pixels_per_frame(self) -> tuple:
        scale = self.p * 1000.0 / self.r
        return (self.v[0] * scale, self.v[1] * scale)

    def cascade(self) -> DiscreteCascadeSpec:
        return build_cascade(self.distribution.with_tau_max(self.tau))


# Parameter sets of the four simple-cell models; p and r are rendering
# choices, not part of the models.
PRESETS = {
    "a": dict(spatial_order=(1, 0), temporal_order=1, sigma_x=0.6, sigma_t=0.060),
    "b": dict(spatial_order=(2, 0), temporal_order=1, sigma_x=0.6, sigma_t=0.080),
    "c": dict(spatial_order=(2, 0), temporal_order=0, sigma_x=0.7, sigma_t=0.050,
              v=(0.007, 0.0)),
    "d": dict(spatial_order=(3, 0), temporal_order=0, sigma_x=0.5, sigma_t=0.080,
              v=(0.004, 0.0)),
}


def preset(name: str, **overrides) -> ReceptiveFieldSpec:
    if name not in PRESETS:
        raise InvalidParameterError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return ReceptiveFieldSpec(**{**PRESETS[name], **overrides})


def sample_rf_kernel(spec: ReceptiveFieldSpec, width: int = 101, frames: int = 64,
                     interpolation: str = "linear", eps: float = 1e-10):
    """Effective discrete x-t kernel of ``spec``.

    A unit impulse at the centre of a 1-D frame is fed at t = 0, followed by
    zero frames.  Returns ``(kernel, x, t)`` with ``kernel`` of shape
    ``(frames, width)``, ``x`` in pixels relative to the centre and ``t``
    in frames.
    """
    width, frames = int(width), int(frames)
    if width < 3 or width % 2 == 0:
        raise InvalidParameterError("width must be odd and >= 3")
    if frames < 1:
        raise InvalidParameterError("frames must be >= 1")
    if spec.spatial_order[1]:
        raise InvalidParameterError("sampled kernels are 1-D in space; x2 order must be 0")
    engine = SpatioTemporalEngine(spec.s, spec.cascade(), [spec.operator],
                                  velocity=spec.velocity_pixels_per_frame(),
                                  interpolation=interpolation, eps=eps)
    impulse = np.zeros(width)
    impulse[width // 2] = 1.0
    zero = np.zeros(width)
    kernel = np.empty((frames, width))
    name = spec.operator.name
    for n in range(frames):
        kernel[n] = engine.process_frame(impulse if n == 0 else zero)[0].maps[name]
    x = np.arange(width) - width // 2
    return kernel, x, np.arange(frames)
