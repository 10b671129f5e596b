"""Command-line interface: ik, fk, traj, dynamics, sweep, force-sweep, motor-check.

Angles cross this boundary in degrees; everything behind it is radians.  All
file output is CSV with a mandatory header row, one sample per row, and a
fixed number format so identical inputs produce byte-identical files.
"""

import argparse
import math
import sys

import numpy as np

from . import analysis, dynamics, trajectory
from .config import Config, default_config, load_config
from .errors import WristError
from .kinematics import (
    ToolOrientation,
    inverse_kinematics,
    forward_kinematics,
    pan_tilt_from_vector,
    trajectory_joint_profiles,
    vector_from_pan_tilt,
)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_floats(text, n=None):
    parts = [float(p) for p in str(text).split(",")]
    if n is not None and len(parts) != n:
        raise WristError(f"expected {n} comma-separated values, got {len(parts)}")
    return parts


def _load(args) -> Config:
    return load_config(args.config) if args.config else default_config()


def _spec_from_args(args, config: Config) -> trajectory.TrajectorySpec:
    kind = trajectory.KIND_CIRCLE if args.traj == "circle" else trajectory.KIND_SEMICIRCLE
    gamma = math.radians(args.gamma) if args.gamma is not None else None
    return trajectory.TrajectorySpec(
        kind=kind,
        radius=args.radius,
        tool_speed=args.speed if args.speed is not None else config.tool_speed,
        gamma=gamma,
        sample_count=args.samples if args.samples is not None else config.sample_count,
    )


def _profiles(spec, config):
    samples = trajectory.generate(spec)
    dt = samples[1].t - samples[0].t
    states = trajectory_joint_profiles([s.orientation for s in samples], dt, config.geometry)
    return states


def cmd_ik(args):
    config = _load(args)
    if args.v is not None:
        orientation = ToolOrientation.normalized(_parse_floats(args.v, 3))
        pan, tilt = pan_tilt_from_vector(orientation)
    elif args.pan is not None and args.tilt is not None:
        pan, tilt = math.radians(args.pan), math.radians(args.tilt)
        orientation = vector_from_pan_tilt(pan, tilt)
    else:
        raise WristError("provide either --v x,y,z or both --pan and --tilt (degrees)")
    angles = inverse_kinematics(orientation, config.geometry)
    print(f"pan_deg = {_fmt(math.degrees(pan))}")
    print(f"tilt_deg = {_fmt(math.degrees(tilt))}")
    for i, value in enumerate(angles.theta, start=1):
        print(f"theta{i}_deg = {_fmt(math.degrees(value))}")
    return 0


def cmd_fk(args):
    config = _load(args)
    v = forward_kinematics(math.radians(args.theta1), math.radians(args.theta3), config.geometry).v
    print(f"v = {_fmt(v[0])}, {_fmt(v[1])}, {_fmt(v[2])}")
    return 0


_PROFILE_HEADER = (
    ["t_s"]
    + [f"theta{i}_rad" for i in range(1, 5)]
    + [f"dtheta{i}_rad_s" for i in range(1, 5)]
    + [f"ddtheta{i}_rad_s2" for i in range(1, 5)]
)


def cmd_traj(args):
    config = _load(args)
    states = _profiles(_spec_from_args(args, config), config)
    rows = [
        [s.t, *s.angles.theta, *s.rates, *s.accels]
        for s in states
    ]
    write_csv(args.out, _PROFILE_HEADER, rows)
    print(f"wrote {len(rows)} samples to {args.out}")
    return 0


def cmd_dynamics(args):
    config = _load(args)
    spec = _spec_from_args(args, config)
    states = _profiles(spec, config)
    lever = args.lc if args.lc is not None else config.geometry.tool_length
    fc = args.fc if args.fc is not None else 0.0
    load = dynamics.CuttingLoad((fc, fc, fc), lever)
    _, solutions = dynamics.solve_trajectory(states, config.geometry, config.bodies, config.gravity, load)
    rows = []
    shaft_peak = [0.0, 0.0]
    for state, sol in zip(states, solutions):
        shaft = [
            dynamics.reflected_motor_torque(sol.tau[i], state.accels[i], config.motors[i])
            for i in range(2)
        ]
        shaft_peak = [max(shaft_peak[i], abs(shaft[i])) for i in range(2)]
        rows.append([state.t, sol.tau[0], sol.tau[1], shaft[0], shaft[1], sol.power[0], sol.power[1]])
    write_csv(args.out, ["t_s", "tau1_Nm", "tau2_Nm", "tau1_shaft_Nm", "tau2_shaft_Nm", "P1_W", "P2_W"], rows)
    print(f"wrote {len(rows)} samples to {args.out}")
    for i in range(2):
        flag = "yes" if shaft_peak[i] > config.motors[i].continuous_torque else "no"
        print(f"tau{i + 1}_shaft_peak_Nm = {_fmt(shaft_peak[i])} exceeds-continuous = {flag}")
    return 0


_SWEEP_HEADER = (
    ["gamma_deg", "radius_m"]
    + [f"max_dtheta{i}_rad_s" for i in range(1, 5)]
    + [f"max_ddtheta{i}_rad_s2" for i in range(1, 5)]
    + ["T1_Nm", "T2_Nm", "P1_W", "P2_W"]
)


def _grid_specs(args, config):
    gammas = _parse_floats(args.gamma)
    radii = _parse_floats(args.radius)
    count = args.samples if args.samples is not None else config.sample_count
    speed = args.speed if args.speed is not None else config.tool_speed
    return [
        trajectory.TrajectorySpec(
            kind=trajectory.KIND_CIRCLE,
            radius=r,
            tool_speed=speed,
            gamma=math.radians(g),
            sample_count=count,
        )
        for g in gammas
        for r in radii
    ]


def cmd_sweep(args):
    config = _load(args)
    specs = _grid_specs(args, config)
    records = analysis.sweep_peaks(specs, config.geometry, config.bodies, config.motors)
    rows = [
        [math.degrees(rec.gamma), rec.radius, *rec.max_rates, *rec.max_accels, *rec.max_torques, *rec.max_powers]
        for rec in records
    ]
    write_csv(args.out, _SWEEP_HEADER, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_force_sweep(args):
    config = _load(args)
    spec = trajectory.TrajectorySpec(
        kind=trajectory.KIND_CIRCLE,
        radius=args.radius,
        tool_speed=args.speed if args.speed is not None else config.tool_speed,
        gamma=math.radians(args.gamma),
        sample_count=args.samples if args.samples is not None else config.sample_count,
    )
    lever = args.lc if args.lc is not None else config.geometry.tool_length
    curve = analysis.force_sweep(spec, _parse_floats(args.fc), lever, config.geometry, config.bodies, config.motors)
    rows = [[fc, *rec.max_torques, *rec.max_powers] for fc, rec in curve]
    write_csv(args.out, ["Fc_N", "T1_Nm", "T2_Nm", "P1_W", "P2_W"], rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_motor_check(args):
    config = _load(args)
    specs = _grid_specs(args, config)
    fc = args.fc if args.fc is not None else 0.0
    lever = args.lc if args.lc is not None else config.geometry.tool_length
    load = dynamics.CuttingLoad((fc, fc, fc), lever)
    records = analysis.sweep_peaks(specs, config.geometry, config.bodies, config.motors, load)
    worst = np.array([max(rec.max_torques[i] for rec in records) for i in range(2)])
    rates = np.array([max(rec.max_rates[i] for rec in records) for i in range(2)])
    peaks = analysis.PeakRecord(None, 0.0, np.concatenate([rates, [0.0, 0.0]]),
                                np.zeros(4), worst, np.zeros(2))
    for i in range(2):
        report = analysis.motor_feasibility(peaks, config.motors[i])
        a = report.actuators[i]
        print(
            f"actuator {i + 1}: peak_torque_Nm = {_fmt(worst[i])} torque = {a.torque_class}"
            f" speed = {a.speed_class} continuous_margin_Nm = {_fmt(a.continuous_margin)}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphwrist",
        description="Kinematics, inverse dynamics, and actuator studies for the 2-DOF spherical wrist",
    )
    parser.add_argument("--config", help="parameter file (defaults to the built-in parameter set)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ik", help="joint angles for a tool direction")
    p.add_argument("--v", help="tool direction x,y,z (normalized)")
    p.add_argument("--pan", type=float, help="pan angle, degrees")
    p.add_argument("--tilt", type=float, help="tilt angle, degrees")
    p.set_defaults(func=cmd_ik)

    p = sub.add_parser("fk", help="tool direction for the leg-1 joint pair")
    p.add_argument("--theta1", type=float, required=True, help="degrees")
    p.add_argument("--theta3", type=float, required=True, help="degrees")
    p.set_defaults(func=cmd_fk)

    def add_traj_args(p, grid=False):
        if grid:
            p.add_argument("--gamma", required=True, help="cone angles, degrees (comma list)")
            p.add_argument("--radius", required=True, help="radii, m (comma list)")
        else:
            p.add_argument("--traj", choices=("circle", "semicircle"), default="circle")
            p.add_argument("--gamma", type=float, help="cone angle, degrees (circle only)")
            p.add_argument("--radius", type=float, required=True, help="m")
        p.add_argument("--speed", type=float, help="tool speed, m/s")
        p.add_argument("--samples", type=int, help="samples per trajectory")

    p = sub.add_parser("traj", help="joint position/velocity/acceleration CSV")
    add_traj_args(p)
    p.add_argument("--out", default="traj_profile.csv")
    p.set_defaults(func=cmd_traj)

    p = sub.add_parser("dynamics", help="actuator torque/power time-series CSV")
    add_traj_args(p)
    p.add_argument("--fc", type=float, help="cutting-force component magnitude, N")
    p.add_argument("--lc", type=float, help="cutting lever arm, m")
    p.add_argument("--out", default="dynamics_series.csv")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("sweep", help="peak table over a (gamma, radius) grid")
    add_traj_args(p, grid=True)
    p.add_argument("--out", default="peaks.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("force-sweep", help="peak torques versus cutting force")
    p.add_argument("--gamma", type=float, required=True, help="degrees")
    p.add_argument("--radius", type=float, required=True, help="m")
    p.add_argument("--fc", required=True, help="force magnitudes, N (comma list)")
    p.add_argument("--lc", type=float, help="lever arm, m")
    p.add_argument("--speed", type=float, help="tool speed, m/s")
    p.add_argument("--samples", type=int, help="samples per trajectory")
    p.add_argument("--out", default="force_sweep.csv")
    p.set_defaults(func=cmd_force_sweep)

    p = sub.add_parser("motor-check", help="feasibility report over a grid")
    add_traj_args(p, grid=True)
    p.add_argument("--fc", type=float, help="cutting-force component magnitude, N")
    p.add_argument("--lc", type=float, help="cutting lever arm, m")
    p.set_defaults(func=cmd_motor_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WristError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
