"""Rotation matrices, frame chains for the wrist legs, and series differentiation.

All operations are pure functions over immutable values; everything is safe to
call concurrently.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

ROTATION_TOL = 1e-12


def _require_finite(name, value):
    if not np.all(np.isfinite(value)):
        raise InvalidInputError(f"{name} must be finite")


def elementary_rotation(axis, angle: float) -> np.ndarray:
    """Right-handed rotation about the X or Z axis.

    ``axis`` accepts "x"/"z" in any case, with or without an "-axis" suffix.
    """
    _require_finite("angle", angle)
    key = str(axis).lower().removesuffix("-axis")
    c, s = math.cos(angle), math.sin(angle)
    if key == "x":
        return np.array([[1.0, 0.0, 0.0],
                         [0.0, c, -s],
                         [0.0, s, c]])
    if key == "z":
        return np.array([[c, -s, 0.0],
                         [s, c, 0.0],
                         [0.0, 0.0, 1.0]])
    raise InvalidInputError(f"unknown rotation axis {axis!r}")


def _rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s],
                     [0.0, 1.0, 0.0],
                     [-s, 0.0, c]])


def dh_rotation(theta: float, alpha: float) -> np.ndarray:
    """Frame step for a zero-offset joint: rotate about Z by theta, then about
    the new X by alpha."""
    _require_finite("theta", theta)
    _require_finite("alpha", alpha)
    return elementary_rotation("z", theta) @ elementary_rotation("x", alpha)


def cross3(a, b) -> np.ndarray:
    """Cross product of two 3-vectors (much cheaper than np.cross for singles)."""
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def is_rotation(R: np.ndarray, tol: float = ROTATION_TOL) -> bool:
    """Check orthonormality and det(R) = +1 entrywise within ``tol``."""
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        return False
    if not np.all(np.abs(R.T @ R - np.eye(3)) <= tol):
        return False
    return abs(np.linalg.det(R) - 1.0) <= tol


def wrap_angle(theta):
    """Reduce angle(s) to the principal interval (-pi, pi]."""
    theta = np.asarray(theta, dtype=float)
    wrapped = np.pi - np.mod(np.pi - theta, 2.0 * np.pi)
    return float(wrapped) if wrapped.ndim == 0 else wrapped


def unwrap_angles(angles, axis: int = 0) -> np.ndarray:
    """Remove 2*pi jumps so consecutive samples differ by at most pi."""
    return np.unwrap(np.asarray(angles, dtype=float), axis=axis)


def _default_alpha():
    return np.full(5, math.pi / 2.0)


def _default_home():
    return np.array([-math.pi / 2.0, math.pi / 2.0, math.pi / 2.0, -math.pi / 2.0])


@dataclass(frozen=True)
class WristGeometry:
    """Joint-axis twists, home configuration, and base mounting of the wrist.

    ``alpha`` holds the five inter-axis angles (base pair first, then one per
    moving joint along the two legs).  ``mount_yaw`` is the azimuth of the
    leg-1 drive axis in the world frame; both drive axes are horizontal and
    orthogonal, and the tool points straight down (-Z) in the home
    configuration.
    """

    alpha: np.ndarray = field(default_factory=_default_alpha)
    home_thetas: np.ndarray = field(default_factory=_default_home)
    tool_length: float = 0.11
    mount_yaw: float = math.pi / 4.0

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float).reshape(-1)
        home = np.asarray(self.home_thetas, dtype=float).reshape(-1)
        if alpha.shape != (5,):
            raise InvalidInputError("alpha must hold 5 angles")
        if home.shape != (4,):
            raise InvalidInputError("home_thetas must hold 4 angles")
        _require_finite("alpha", alpha)
        _require_finite("home_thetas", home)
        _require_finite("mount_yaw", self.mount_yaw)
        if not (np.isfinite(self.tool_length) and self.tool_length > 0.0):
            raise InvalidInputError("tool_length must be positive")
        alpha.setflags(write=False)
        home.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "home_thetas", home)

    @property
    def base_axes(self) -> np.ndarray:
        """Columns are the leg-1 base frame axes expressed in the world frame."""
        c, s = math.cos(self.mount_yaw), math.sin(self.mount_yaw)
        return np.array([[-s, 0.0, c],
                         [c, 0.0, s],
                         [0.0, 1.0, 0.0]])


def chain_frames(thetas, geometry: WristGeometry, leg):
    """Frame orientations and joint axes along one leg, in the world frame.

    Returns ``(frames, axes)``: three orientation matrices (fixed base frame
    of the leg, then one per joint step) and their third columns.  Leg 1
    carries the joint pair (theta1, theta3); leg 2 carries (theta2, theta4).
    """
    thetas = np.asarray(thetas, dtype=float).reshape(-1)
    if thetas.shape != (2,):
        raise InvalidInputError("each leg carries exactly 2 joint angles")
    _require_finite("thetas", thetas)
    key = str(leg).removeprefix("leg-")
    alpha = geometry.alpha
    base = geometry.base_axes
    if key == "1":
        f0 = base
        f1 = f0 @ dh_rotation(thetas[0], alpha[1])
        f2 = f1 @ dh_rotation(thetas[1], alpha[3])
    elif key == "2":
        f0 = base @ _rot_y(alpha[0])
        f1 = f0 @ dh_rotation(thetas[0], alpha[2])
        f2 = f1 @ dh_rotation(thetas[1], alpha[4])
    else:
        raise InvalidInputError(f"unknown leg {leg!r}")
    frames = [f0, f1, f2]
    axes = [f[:, 2].copy() for f in frames]
    return frames, axes


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled scalar or vector series."""

    dt: float
    values: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise InvalidInputError("dt must be positive")
        values = np.asarray(self.values, dtype=float)
        if values.shape[0] < 3:
            raise InvalidInputError("need at least 3 samples")
        _require_finite("values", values)
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def central_difference(series: TimeSeries) -> TimeSeries:
    """Second-order time derivative estimate of a sampled series.

    Central stencils on interior points, one-sided second-order stencils at
    the two ends; output length equals input length.
    """
    v = series.values
    dt = series.dt
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2.0 * dt)
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt)
    out[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * dt)
    return TimeSeries(dt, out)
