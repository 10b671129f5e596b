"""Configuration file loading and validation.

The format is flat ``key = value`` text with dotted section names; values are
numbers or comma-separated number lists.  Validation failures always name the
offending key.
"""

import importlib.resources
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import BODY_NAMES, BodyParams, MotorSpec
from .errors import ConfigError, WristError
from .rotation import WristGeometry

DEFAULT_SAMPLE_COUNT = 1001
DEFAULT_TOOL_SPEED = 1.0


@dataclass(frozen=True)
class Config:
    """Fully validated run configuration."""

    geometry: WristGeometry
    bodies: list
    motors: tuple
    gravity: np.ndarray
    sample_count: int
    tool_speed: float

    def body(self, name: str) -> BodyParams:
        for b in self.bodies:
            if b.name == name:
                return b
        raise ConfigError(f"no body named {name!r}")


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines into a dict of float lists."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            entries[key] = [float(part) for part in value.split(",")]
        except ValueError:
            raise ConfigError(f"line {lineno}: key {key!r} has a non-numeric value {value.strip()!r}") from None
    return entries


class _Entries:
    def __init__(self, entries):
        self.entries = dict(entries)
        self.used = set()

    def take(self, key, length=None, default=None):
        if key not in self.entries:
            if default is not None:
                return list(default)
            raise ConfigError(f"missing required key {key!r}")
        self.used.add(key)
        values = self.entries[key]
        if length is not None and len(values) != length:
            raise ConfigError(f"key {key!r} must hold {length} value(s), got {len(values)}")
        return values

    def scalar(self, key, default=None):
        return self.take(key, 1, None if default is None else [default])[0]

    def unused(self):
        return sorted(set(self.entries) - self.used)


def _build_body(entries: _Entries, name: str) -> BodyParams:
    prefix = f"body.{name}"
    ixx, iyy, izz, ixy, ixz, iyz = entries.take(f"{prefix}.inertia", 6)
    inertia = np.array([[ixx, ixy, ixz], [ixy, iyy, iyz], [ixz, iyz, izz]])
    point_prefix = f"{prefix}.point."
    points = {
        key[len(point_prefix):]: entries.take(key, 3)
        for key in list(entries.entries)
        if key.startswith(point_prefix)
    }
    try:
        return BodyParams(
            name=name,
            mass=entries.scalar(f"{prefix}.mass"),
            com_offset=entries.take(f"{prefix}.com_offset", 3),
            inertia=inertia,
            force_points=points,
        )
    except WristError as exc:
        raise ConfigError(f"{prefix}: {exc}") from exc


def _build_motor(entries: _Entries, index: int) -> MotorSpec:
    prefix = f"motor.{index}"
    try:
        return MotorSpec(
            rotor_inertia=entries.scalar(f"{prefix}.rotor_inertia"),
            reduction_ratio=entries.scalar(f"{prefix}.reduction_ratio"),
            nominal_speed=entries.scalar(f"{prefix}.nominal_speed"),
            max_speed=entries.scalar(f"{prefix}.max_speed"),
            max_torque=entries.scalar(f"{prefix}.max_torque"),
            continuous_torque=entries.scalar(f"{prefix}.continuous_torque"),
            rated_power=entries.scalar(f"{prefix}.rated_power"),
        )
    except WristError as exc:
        raise ConfigError(f"{prefix}: {exc}") from exc


def config_from_text(text: str) -> Config:
    entries = _Entries(parse_config_text(text))
    try:
        geometry = WristGeometry(
            alpha=entries.take("geometry.alpha", 5),
            home_thetas=entries.take("geometry.home_thetas", 4),
            tool_length=entries.scalar("geometry.tool_length", 0.11),
            mount_yaw=entries.scalar("geometry.mount_yaw", math.pi / 4.0),
        )
    except WristError as exc:
        raise ConfigError(f"geometry: {exc}") from exc

    bodies = [_build_body(entries, name) for name in BODY_NAMES]
    motors = (_build_motor(entries, 1), _build_motor(entries, 2))
    gravity = np.asarray(entries.take("gravity", 3, (0.0, 0.0, -9.81)), dtype=float)

    sample_count = entries.scalar("defaults.sample_count", float(DEFAULT_SAMPLE_COUNT))
    if sample_count != int(sample_count) or int(sample_count) < 3:
        raise ConfigError("key 'defaults.sample_count' must be an integer >= 3")
    tool_speed = entries.scalar("defaults.tool_speed", DEFAULT_TOOL_SPEED)
    if not (np.isfinite(tool_speed) and tool_speed > 0.0):
        raise ConfigError("key 'defaults.tool_speed' must be positive")

    unused = entries.unused()
    if unused:
        raise ConfigError(f"unknown key(s): {', '.join(unused)}")
    return Config(geometry, bodies, motors, gravity, int(sample_count), tool_speed)


def default_config_text() -> str:
    return importlib.resources.files("sphwrist").joinpath("default.cfg").read_text()


def default_config() -> Config:
    """The shipped parameter set."""
    return config_from_text(default_config_text())


def load_config(path) -> Config:
    """Load and validate a configuration file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return config_from_text(path.read_text())
