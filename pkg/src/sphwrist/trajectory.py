"""Generators for the two benchmark tool-orientation paths.

Both paths move the tool tip at constant speed, so the path angle advances at
``tool_speed / radius``.  Orientations are emitted in the world frame.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError
from .kinematics import ToolOrientation

KIND_SEMICIRCLE = "semicircle-YZ"
KIND_CIRCLE = "circle-XY"

DEFAULT_SAMPLE_COUNT = 1001
DEFAULT_TOOL_SPEED = 1.0


@dataclass(frozen=True)
class TrajectorySpec:
    """Parameters of one benchmark path."""

    kind: str
    radius: float
    tool_speed: float = DEFAULT_TOOL_SPEED
    gamma: float | None = None
    sample_count: int = DEFAULT_SAMPLE_COUNT

    def __post_init__(self):
        if self.kind not in (KIND_SEMICIRCLE, KIND_CIRCLE):
            raise InvalidSpecError(f"unknown trajectory kind {self.kind!r}")
        if not (np.isfinite(self.radius) and self.radius > 0.0):
            raise InvalidSpecError("radius must be positive")
        if not (np.isfinite(self.tool_speed) and self.tool_speed > 0.0):
            raise InvalidSpecError("tool_speed must be positive")
        if self.sample_count < 3:
            raise InvalidSpecError("sample_count must be at least 3")
        if self.kind == KIND_CIRCLE:
            if self.gamma is None or not np.isfinite(self.gamma):
                raise InvalidSpecError("circle-XY requires a cone angle gamma")
            if not 0.0 < self.gamma < math.pi / 2.0:
                raise InvalidSpecError("gamma must lie strictly between 0 and pi/2")


@dataclass(frozen=True)
class TimedOrientation:
    t: float
    orientation: ToolOrientation


def traj_semicircle(spec: TrajectorySpec):
    """Semicircular sweep in the vertical YZ plane.

    The path angle runs from pi/6 to 5*pi/6; total duration is
    (2*pi/3) * radius / tool_speed.
    """
    if spec.kind != KIND_SEMICIRCLE:
        raise InvalidSpecError(f"expected {KIND_SEMICIRCLE!r}, got {spec.kind!r}")
    rate = spec.tool_speed / spec.radius
    delta = np.linspace(math.pi / 6.0, 5.0 * math.pi / 6.0, spec.sample_count)
    return [
        TimedOrientation(
            (d - delta[0]) / rate,
            ToolOrientation(np.array([0.0, -math.sin(d), -math.cos(d)])),
        )
        for d in delta
    ]


def traj_circle(spec: TrajectorySpec):
    """Full circle in the horizontal XY plane at constant cone angle gamma.

    The path angle runs from 0 to 2*pi; total duration is
    2*pi * radius / tool_speed.
    """
    if spec.kind != KIND_CIRCLE:
        raise InvalidSpecError(f"expected {KIND_CIRCLE!r}, got {spec.kind!r}")
    rate = spec.tool_speed / spec.radius
    sg, cg = math.sin(spec.gamma), math.cos(spec.gamma)
    delta = np.linspace(0.0, 2.0 * math.pi, spec.sample_count)
    return [
        TimedOrientation(
            d / rate,
            ToolOrientation(np.array([sg * math.cos(d), sg * math.sin(d), -cg])),
        )
        for d in delta
    ]


def generate(spec: TrajectorySpec):
    """Dispatch on the trajectory kind."""
    if spec.kind == KIND_SEMICIRCLE:
        return traj_semicircle(spec)
    return traj_circle(spec)
