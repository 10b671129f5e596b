"""Batch studies: peak tables, cutting-force sweeps, and motor feasibility."""

from dataclasses import dataclass

import numpy as np

from .dynamics import (
    GRAVITY,
    CuttingLoad,
    MotorSpec,
    reflected_motor_torque,
    solve_trajectory,
)
from .errors import InvalidInputError
from .kinematics import trajectory_joint_profiles
from .trajectory import TrajectorySpec, generate

TORQUE_CONTINUOUS_OK = "continuous-ok"
TORQUE_INTERMITTENT = "intermittent-only"
TORQUE_INFEASIBLE = "infeasible"
SPEED_OK = "ok"
SPEED_OVER_NOMINAL = "over-nominal"
SPEED_OVER_MAX = "over-max"


@dataclass(frozen=True)
class PeakRecord:
    """Per-trajectory absolute maxima of joint kinematics and actuator loads.

    Torques are output-shaft values including the reflected rotor inertia;
    powers are maxima of the instantaneous shaft torque times joint rate.
    """

    gamma: float | None
    radius: float
    max_rates: np.ndarray
    max_accels: np.ndarray
    max_torques: np.ndarray
    max_powers: np.ndarray


@dataclass(frozen=True)
class ActuatorFeasibility:
    torque_class: str
    speed_class: str
    continuous_margin: float
    max_margin: float
    speed_margin: float


@dataclass(frozen=True)
class FeasibilityReport:
    actuators: tuple


def _motor_pair(motors):
    if isinstance(motors, MotorSpec):
        return motors, motors
    motors = tuple(motors)
    if len(motors) != 2:
        raise InvalidInputError("expected one MotorSpec or a pair")
    return motors


def _peaks_for_spec(spec: TrajectorySpec, geometry, bodies, motors, gravity, load):
    samples = generate(spec)
    dt = samples[1].t - samples[0].t
    states = trajectory_joint_profiles([s.orientation for s in samples], dt, geometry)
    _, solutions = solve_trajectory(states, geometry, bodies, gravity, load)

    motor1, motor2 = _motor_pair(motors)
    n = len(states)
    rates = np.array([s.rates for s in states])
    accels = np.array([s.accels for s in states])
    shaft = np.empty((n, 2))
    for i, (state, sol) in enumerate(zip(states, solutions)):
        shaft[i, 0] = reflected_motor_torque(sol.tau[0], state.accels[0], motor1)
        shaft[i, 1] = reflected_motor_torque(sol.tau[1], state.accels[1], motor2)
    power = shaft * rates[:, :2]
    return PeakRecord(
        gamma=spec.gamma,
        radius=spec.radius,
        max_rates=np.max(np.abs(rates), axis=0),
        max_accels=np.max(np.abs(accels), axis=0),
        max_torques=np.max(np.abs(shaft), axis=0),
        max_powers=np.max(np.abs(power), axis=0),
    )


def sweep_peaks(specs, geometry, bodies, motors, load: CuttingLoad | None = None, gravity=GRAVITY):
    """Peak records for each trajectory spec, in input order."""
    records = []
    for spec in specs:
        try:
            records.append(_peaks_for_spec(spec, geometry, bodies, motors, gravity, load))
        except Exception as exc:
            raise type(exc)(f"spec (kind={spec.kind}, gamma={spec.gamma}, R={spec.radius}): {exc}") from exc
    return records


def force_sweep(base_spec: TrajectorySpec, fc_values, lc: float, geometry, bodies, motors, gravity=GRAVITY):
    """Peak-torque curve versus cutting-force magnitude at fixed lever arm.

    The three cutting-force components are set equal to each value in
    ``fc_values``.
    """
    fc_values = [float(f) for f in fc_values]
    if any(f < 0.0 or not np.isfinite(f) for f in fc_values):
        raise InvalidInputError("cutting-force magnitudes must be non-negative")
    curve = []
    for fc in fc_values:
        load = CuttingLoad((fc, fc, fc), lc)
        record = sweep_peaks([base_spec], geometry, bodies, motors, load, gravity)[0]
        curve.append((fc, record))
    return curve


def motor_feasibility(peaks: PeakRecord, motor: MotorSpec) -> FeasibilityReport:
    """Classify each actuator's peak torque and shaft speed against one motor."""
    actuators = []
    for i in range(2):
        torque = float(peaks.max_torques[i])
        if torque <= motor.continuous_torque:
            torque_class = TORQUE_CONTINUOUS_OK
        elif torque <= motor.max_torque:
            torque_class = TORQUE_INTERMITTENT
        else:
            torque_class = TORQUE_INFEASIBLE
        shaft_speed = float(peaks.max_rates[i]) * motor.reduction_ratio
        if shaft_speed <= motor.nominal_speed:
            speed_class = SPEED_OK
        elif shaft_speed <= motor.max_speed:
            speed_class = SPEED_OVER_NOMINAL
        else:
            speed_class = SPEED_OVER_MAX
        actuators.append(ActuatorFeasibility(
            torque_class=torque_class,
            speed_class=speed_class,
            continuous_margin=motor.continuous_torque - torque,
            max_margin=motor.max_torque - torque,
            speed_margin=motor.max_speed - shaft_speed,
        ))
    return FeasibilityReport(tuple(actuators))
