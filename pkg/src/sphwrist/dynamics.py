"""Newton-Euler inverse dynamics of the four moving wrist links.

Joint model: the two base joints and the first-leg elbow are frictionless
revolutes; the terminal-distal connection is the physical revolute about the
shared tool axis (three forces at its bearing point plus two moments
transverse to that axis); the distal rides on the second proximal through a
frictionless planar joint (one normal force through the wrist center plus
two in-plane moments).  That wrench set closes every load path of the real
mechanism while staying workless, so for loop-consistent joint states the
24-equation system is solvable to rounding error.  It carries one internal
self-stress (24 equations, 25 unknowns); the minimum-norm least-squares
solution resolves it, and the actuator torques are invariant to that choice.

Every body rotates about the fixed wrist center: Euler equations are taken
about that point and center-of-mass accelerations are purely rotational.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentStateError, InvalidInputError, ModelInconsistencyError
from .kinematics import JointState
from .rotation import WristGeometry, chain_frames, cross3

GRAVITY = np.array([0.0, 0.0, -9.81])

RESIDUAL_GATE = 1e-8
CLOSURE_TOL = 1e-6

BODY_NAMES = ("terminal", "distal", "proximal-1", "proximal-2")


def _as_vector(name, value, length=3):
    v = np.asarray(value, dtype=float).reshape(-1)
    if v.shape != (length,):
        raise InvalidInputError(f"{name} must be a {length}-vector")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError(f"{name} must be finite")
    return v


@dataclass(frozen=True)
class BodyParams:
    """Mass, geometry, and inertia of one link, in its own body frame.

    ``com_offset`` points from the wrist center to the center of mass;
    ``force_points`` name the joint interaction points the same way.
    ``inertia`` is taken about the center of mass.
    """

    name: str
    mass: float
    com_offset: np.ndarray
    inertia: np.ndarray
    force_points: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in BODY_NAMES:
            raise InvalidInputError(f"unknown body name {self.name!r}")
        if not (np.isfinite(self.mass) and self.mass > 0.0):
            raise InvalidInputError(f"{self.name}: mass must be positive")
        com = _as_vector(f"{self.name}.com_offset", self.com_offset)
        inertia = np.asarray(self.inertia, dtype=float)
        if inertia.shape != (3, 3) or not np.all(np.isfinite(inertia)):
            raise InvalidInputError(f"{self.name}: inertia must be a finite 3x3 tensor")
        if np.max(np.abs(inertia - inertia.T)) > 1e-12 * max(1.0, np.max(np.abs(inertia))):
            raise InvalidInputError(f"{self.name}: inertia must be symmetric")
        if np.min(np.linalg.eigvalsh(inertia)) <= 0.0:
            raise InvalidInputError(f"{self.name}: inertia must be positive-definite")
        points = {k: _as_vector(f"{self.name}.force_points[{k}]", v) for k, v in self.force_points.items()}
        com.setflags(write=False)
        inertia = inertia.copy()
        inertia.setflags(write=False)
        for v in points.values():
            v.setflags(write=False)
        object.__setattr__(self, "com_offset", com)
        object.__setattr__(self, "inertia", inertia)
        object.__setattr__(self, "force_points", points)


@dataclass(frozen=True)
class MotorSpec:
    """Catalog data of one actuator, referred to the output shaft."""

    rotor_inertia: float = 0.00262
    reduction_ratio: float = 1.0
    nominal_speed: float = 2500.0 * math.pi / 30.0
    max_speed: float = 6500.0 * math.pi / 30.0
    max_torque: float = 74.0
    continuous_torque: float = 23.0
    rated_power: float = 800.0

    def __post_init__(self):
        if not (np.isfinite(self.rotor_inertia) and self.rotor_inertia >= 0.0):
            raise InvalidInputError("motor rotor_inertia must be non-negative")
        for name in ("reduction_ratio", "nominal_speed", "max_speed",
                     "max_torque", "continuous_torque", "rated_power"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0.0):
                raise InvalidInputError(f"motor {name} must be positive")
        if self.max_torque < self.continuous_torque:
            raise InvalidInputError("max_torque must be at least continuous_torque")
        if self.max_speed < self.nominal_speed:
            raise InvalidInputError("max_speed must be at least nominal_speed")


@dataclass(frozen=True)
class CuttingLoad:
    """Cutting force at the tool tip.

    Components are given along the terminal's drive axis, the tool axis, and
    their cross product; ``lever`` is the tip distance from the wrist center.
    """

    f_c: np.ndarray = field(default_factory=lambda: np.zeros(3))
    lever: float = 0.0

    def __post_init__(self):
        f = _as_vector("f_c", self.f_c)
        if not (np.isfinite(self.lever) and self.lever >= 0.0):
            raise InvalidInputError("lever must be non-negative")
        f.setflags(write=False)
        object.__setattr__(self, "f_c", f)

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.f_c == 0.0))


@dataclass(frozen=True)
class BodyMotion:
    """World-frame rigid-body motion of one link about the wrist center."""

    name: str
    R: np.ndarray
    omega: np.ndarray
    omega_dot: np.ndarray
    r_com: np.ndarray
    v_com: np.ndarray
    a_com: np.ndarray


@dataclass(frozen=True)
class WristMotion:
    """Per-body motions plus the joint axes, for one joint state."""

    bodies: dict
    axes: dict
    state: JointState
    closure_error: float


def body_motion(state: JointState, geometry: WristGeometry, bodies) -> WristMotion:
    """Angular velocity/acceleration and center-of-mass motion of every link.

    Each proximal link spins about its fixed drive axis; the terminal and the
    distal compound their leg's two joint rates, including the distal's spin
    about the planar-joint normal, which the leg-2 chain resolves directly.
    """
    params = _index_bodies(bodies)
    th = state.angles.theta
    dth = state.rates
    ddth = state.accels

    frames1, axes1 = chain_frames((th[0], th[2]), geometry, "leg-1")
    frames2, axes2 = chain_frames((th[1], th[3]), geometry, "leg-2")
    e1, e3, e5 = axes1
    e2, e4, e6 = axes2

    closure = float(np.linalg.norm(e5 - e6))
    if closure > CLOSURE_TOL:
        raise InconsistentStateError(
            f"legs disagree on the tool axis by {closure:.2e}; joint angles do not close the loop"
        )

    motions = {}

    def add(name, R, omega, omega_dot):
        p = params[name]
        r = R @ p.com_offset
        v = cross3(omega, r)
        a = cross3(omega_dot, r) + cross3(omega, v)
        motions[name] = BodyMotion(name, R, omega, omega_dot, r, v, a)

    add("proximal-1", frames1[1], dth[0] * e1, ddth[0] * e1)
    add("terminal", frames1[2],
        dth[0] * e1 + dth[2] * e3,
        ddth[0] * e1 + ddth[2] * e3 + dth[0] * dth[2] * cross3(e1, e3))
    add("proximal-2", frames2[1], dth[1] * e2, ddth[1] * e2)
    add("distal", frames2[2],
        dth[1] * e2 + dth[3] * e4,
        ddth[1] * e2 + ddth[3] * e4 + dth[1] * dth[3] * cross3(e2, e4))

    axes = {"e1": e1, "e2": e2, "e3": e3, "e4": e4, "e5": e5, "e6": e6}
    return WristMotion(motions, axes, state, closure)


def _index_bodies(bodies):
    params = {b.name: b for b in bodies}
    missing = [n for n in BODY_NAMES if n not in params]
    if missing:
        raise InvalidInputError(f"missing body parameters for {missing}")
    return params


def _transverse_basis(axis, seed):
    t1 = seed - np.dot(seed, axis) * axis
    n = np.linalg.norm(t1)
    if n < 1e-9:
        raise InconsistentStateError("cannot build a transverse moment basis; axes are aligned")
    t1 = t1 / n
    return t1, cross3(axis, t1)


UNKNOWN_SLICES = {
    "terminal_revolute_force": slice(0, 3),
    "terminal_revolute_moment": slice(3, 5),
    "tool_revolute_force": slice(5, 8),
    "tool_revolute_moment": slice(8, 10),
    "base1_force": slice(10, 13),
    "base1_moment": slice(13, 15),
    "tau1": slice(15, 16),
    "base2_force": slice(16, 19),
    "base2_moment": slice(19, 21),
    "tau2": slice(21, 22),
    "planar_force": slice(22, 23),
    "planar_moment": slice(23, 25),
}

N_UNKNOWNS = 25
N_EQUATIONS = 24

_ROWS = {
    "terminal": (slice(0, 3), slice(3, 6)),
    "distal": (slice(6, 9), slice(9, 12)),
    "proximal-1": (slice(12, 15), slice(15, 18)),
    "proximal-2": (slice(18, 21), slice(21, 24)),
}


@dataclass(frozen=True)
class AssembledSystem:
    """Linear Newton-Euler system for one sample."""

    matrix: np.ndarray
    rhs: np.ndarray
    labels: tuple
    actuated_rates: np.ndarray


def _skew(v):
    return np.array([[0.0, -v[2], v[1]],
                     [v[2], 0.0, -v[0]],
                     [-v[1], v[0], 0.0]])


def cutting_wrench(motion: WristMotion, load: CuttingLoad):
    """World-frame force at the tool tip and its moment about the center."""
    e3, e5 = motion.axes["e3"], motion.axes["e5"]
    f = load.f_c[0] * e3 + load.f_c[1] * e5 + load.f_c[2] * cross3(e3, e5)
    tip = load.lever * e5
    return f, cross3(tip, f)


def assemble_system(motion: WristMotion, bodies, gravity=GRAVITY, load: CuttingLoad | None = None) -> AssembledSystem:
    """Build the 24-equation force/moment balance with shared joint unknowns.

    Action equals reaction by construction: each interface wrench appears
    once, with opposite signs on the two bodies it couples.  The right-hand
    side carries the inertial terms, gravity, and the cutting wrench.
    """
    params = _index_bodies(bodies)
    gravity = _as_vector("gravity", gravity)
    load = load if load is not None else CuttingLoad()

    e1, e2, e3, e4 = (motion.axes[k] for k in ("e1", "e2", "e3", "e4"))
    e5 = motion.axes["e5"]
    R_t = motion.bodies["terminal"].R
    R_p1 = motion.bodies["proximal-1"].R

    p_t3 = R_t @ params["terminal"].force_points.get("joint_proximal1", np.zeros(3))
    p_tool = R_t @ params["terminal"].force_points.get("joint_distal", np.zeros(3))
    p_b1 = R_p1 @ params["proximal-1"].force_points.get("joint_base", np.zeros(3))
    p_b2 = motion.bodies["proximal-2"].R @ params["proximal-2"].force_points.get("joint_base", np.zeros(3))

    t31, t32 = _transverse_basis(e3, e5)
    m51, m52 = _transverse_basis(e5, e3)
    u11, u12 = _transverse_basis(e1, e3)
    u21, u22 = _transverse_basis(e2, e4)
    q1, q2 = _transverse_basis(e4, e2)

    A = np.zeros((N_EQUATIONS, N_UNKNOWNS))
    b = np.zeros(N_EQUATIONS)

    def put_force(rows, col_slice, sign, point):
        newton, euler = rows
        A[newton, col_slice] += sign * np.eye(3)
        A[euler, col_slice] += sign * _skew(point)

    def put_moment(rows, col, sign, axis):
        A[rows[1], col] += sign * axis

    rows_t = _ROWS["terminal"]
    rows_d = _ROWS["distal"]
    rows_p1 = _ROWS["proximal-1"]
    rows_p2 = _ROWS["proximal-2"]
    s = UNKNOWN_SLICES

    # proximal-1 <-> terminal revolute (about e3) at p_t3
    put_force(rows_t, s["terminal_revolute_force"], +1.0, p_t3)
    put_force(rows_p1, s["terminal_revolute_force"], -1.0, p_t3)
    put_moment(rows_t, s["terminal_revolute_moment"].start, +1.0, t31)
    put_moment(rows_t, s["terminal_revolute_moment"].start + 1, +1.0, t32)
    put_moment(rows_p1, s["terminal_revolute_moment"].start, -1.0, t31)
    put_moment(rows_p1, s["terminal_revolute_moment"].start + 1, -1.0, t32)

    # distal <-> terminal revolute (about the tool axis e5) at p_tool
    put_force(rows_t, s["tool_revolute_force"], +1.0, p_tool)
    put_force(rows_d, s["tool_revolute_force"], -1.0, p_tool)
    put_moment(rows_t, s["tool_revolute_moment"].start, +1.0, m51)
    put_moment(rows_t, s["tool_revolute_moment"].start + 1, +1.0, m52)
    put_moment(rows_d, s["tool_revolute_moment"].start, -1.0, m51)
    put_moment(rows_d, s["tool_revolute_moment"].start + 1, -1.0, m52)

    # base <-> proximal-1 actuated revolute (about e1) at p_b1
    put_force(rows_p1, s["base1_force"], +1.0, p_b1)
    put_moment(rows_p1, s["base1_moment"].start, +1.0, u11)
    put_moment(rows_p1, s["base1_moment"].start + 1, +1.0, u12)
    put_moment(rows_p1, s["tau1"].start, +1.0, e1)

    # base <-> proximal-2 actuated revolute (about e2) at p_b2
    put_force(rows_p2, s["base2_force"], +1.0, p_b2)
    put_moment(rows_p2, s["base2_moment"].start, +1.0, u21)
    put_moment(rows_p2, s["base2_moment"].start + 1, +1.0, u22)
    put_moment(rows_p2, s["tau2"].start, +1.0, e2)

    # distal <-> proximal-2 planar joint: normal force through the center,
    # two in-plane moments.
    A[rows_d[0], s["planar_force"].start] += e4
    A[rows_p2[0], s["planar_force"].start] -= e4
    put_moment(rows_d, s["planar_moment"].start, +1.0, q1)
    put_moment(rows_d, s["planar_moment"].start + 1, +1.0, q2)
    put_moment(rows_p2, s["planar_moment"].start, -1.0, q1)
    put_moment(rows_p2, s["planar_moment"].start + 1, -1.0, q2)

    f_cut, m_cut = cutting_wrench(motion, load)
    for name in BODY_NAMES:
        p = params[name]
        m = motion.bodies[name]
        newton, euler = _ROWS[name]
        inertia_o = m.R @ (p.inertia + p.mass * (
            np.dot(p.com_offset, p.com_offset) * np.eye(3) - np.outer(p.com_offset, p.com_offset)
        )) @ m.R.T
        b[newton] = p.mass * m.a_com - p.mass * gravity
        b[euler] = inertia_o @ m.omega_dot + cross3(m.omega, inertia_o @ m.omega) - cross3(m.r_com, p.mass * gravity)
        if name == "terminal":
            b[newton] -= f_cut
            b[euler] -= m_cut

    labels = []
    for key, sl in UNKNOWN_SLICES.items():
        n = sl.stop - sl.start
        labels.extend([key] if n == 1 else [f"{key}[{i}]" for i in range(n)])
    rates = np.array([motion.state.rates[0], motion.state.rates[1]])
    return AssembledSystem(A, b, tuple(labels), rates)


@dataclass(frozen=True)
class DynamicsSolution:
    """Actuator torques, joint reactions, solve residual, and actuator powers."""

    tau: np.ndarray
    reactions: dict
    residual: float
    power: np.ndarray


def solve_wrenches(system: AssembledSystem) -> DynamicsSolution:
    """Minimum-norm least-squares solve with a hard consistency gate.

    The actuator torques are unique; the self-stress component of the
    reactions is fixed by the minimum-norm choice.
    """
    x, *_ = np.linalg.lstsq(system.matrix, system.rhs, rcond=None)
    r = system.matrix @ x - system.rhs
    rhs_norm = float(np.linalg.norm(system.rhs))
    residual = float(np.linalg.norm(r)) / rhs_norm if rhs_norm > 0.0 else float(np.linalg.norm(r))
    if residual >= RESIDUAL_GATE:
        raise ModelInconsistencyError(
            f"relative solve residual {residual:.2e} exceeds {RESIDUAL_GATE:.0e}; "
            "the joint state or body parameters are inconsistent with the joint model"
        )
    tau = np.array([x[UNKNOWN_SLICES["tau1"].start], x[UNKNOWN_SLICES["tau2"].start]])
    reactions = {key: (x[sl].copy() if sl.stop - sl.start > 1 else float(x[sl.start]))
                 for key, sl in UNKNOWN_SLICES.items()}
    power = tau * system.actuated_rates
    return DynamicsSolution(tau, reactions, residual, power)


def reflected_motor_torque(tau_joint: float, joint_accel: float, motor: MotorSpec) -> float:
    """Output-shaft torque including the reflected rotor inertia."""
    if not (np.isfinite(tau_joint) and np.isfinite(joint_accel)):
        raise InvalidInputError("torque and acceleration must be finite")
    return tau_joint + motor.rotor_inertia * motor.reduction_ratio ** 2 * joint_accel


def power_balance_residual(state: JointState, solution: DynamicsSolution, motion: WristMotion,
                           bodies, gravity=GRAVITY, load: CuttingLoad | None = None) -> float:
    """Relative mismatch between supplied power and the kinetic-energy rate.

    Independent check on the wrench solve: actuator power plus gravity and
    cutting power must equal d(KE)/dt, with everything evaluated analytically
    from the motion terms.
    """
    params = _index_bodies(bodies)
    gravity = _as_vector("gravity", gravity)
    load = load if load is not None else CuttingLoad()

    ke_rate = 0.0
    p_gravity = 0.0
    for name in BODY_NAMES:
        p = params[name]
        m = motion.bodies[name]
        inertia_c = m.R @ p.inertia @ m.R.T
        ke_rate += float(m.omega @ (inertia_c @ m.omega_dot) + p.mass * (m.v_com @ m.a_com))
        p_gravity += float(p.mass * (gravity @ m.v_com))

    f_cut, _ = cutting_wrench(motion, load)
    tip_velocity = cross3(motion.bodies["terminal"].omega, load.lever * motion.axes["e5"])
    p_cut = float(f_cut @ tip_velocity)
    p_act = float(solution.tau @ np.array([state.rates[0], state.rates[1]]))
    return abs(p_act + p_gravity + p_cut - ke_rate) / max(1.0, abs(ke_rate))


def solve_state(state: JointState, geometry: WristGeometry, bodies,
                gravity=GRAVITY, load: CuttingLoad | None = None):
    """Motion, assembly, and solve for one joint state."""
    motion = body_motion(state, geometry, bodies)
    solution = solve_wrenches(assemble_system(motion, bodies, gravity, load))
    return motion, solution


def solve_trajectory(states, geometry: WristGeometry, bodies,
                     gravity=GRAVITY, load: CuttingLoad | None = None):
    """Per-sample solves along a joint-state series, in input order."""
    motions = []
    solutions = []
    for state in states:
        motion, solution = solve_state(state, geometry, bodies, gravity, load)
        motions.append(motion)
        solutions.append(solution)
    return motions, solutions


def default_bodies():
    """Plausible link parameters for a wrist of this size class."""
    return [
        BodyParams(
            name="terminal",
            mass=0.80,
            com_offset=(0.0, 0.03, 0.05),
            inertia=np.diag([2.4e-3, 2.0e-3, 1.1e-3]),
            force_points={"joint_proximal1": (0.0, 0.08, 0.0), "joint_distal": (0.0, 0.0, -0.07)},
        ),
        BodyParams(
            name="distal",
            mass=0.45,
            com_offset=(0.0, 0.055, -0.035),
            inertia=np.diag([1.2e-3, 8.0e-4, 1.0e-3]),
            force_points={"joint_terminal": (0.0, 0.0, -0.07)},
        ),
        BodyParams(
            name="proximal-1",
            mass=0.60,
            com_offset=(0.0, 0.045, 0.05),
            inertia=np.diag([1.4e-3, 1.1e-3, 8.0e-4]),
            force_points={"joint_base": (0.0, 0.06, 0.0), "joint_terminal": (0.0, 0.0, 0.08)},
        ),
        BodyParams(
            name="proximal-2",
            mass=0.65,
            com_offset=(0.0, 0.05, 0.055),
            inertia=np.diag([1.5e-3, 1.2e-3, 9.0e-4]),
            force_points={"joint_base": (0.0, 0.06, 0.0)},
        ),
    ]


def default_motor() -> MotorSpec:
    """Catalog values of the harmonic-drive actuator used for both joints."""
    return MotorSpec()
