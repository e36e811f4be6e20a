"""Variable-impedance admittance control and the move executors.

The admittance law integrated here is

    a = M^-1 (K_p (x_d - x) + K_d (xd_d - xd) + (f_d - f_s))

per Cartesian axis (diagonal gains). ``f_s`` is the wrench the tool applies
to the environment, i.e. the negated reaction force that the status reports.
Target accelerations are zero: every command is a static waypoint.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .conditions import DEFAULT_APPROX_EPS, evaluate_condition
from .pose_math import Pose, rotation_angle, rpy_to_matrix, wrap_angles

DEFAULT_STIFFNESS = (400.0, 400.0, 400.0, 40.0, 40.0, 40.0)
DEFAULT_IMPEDANCE = (1.0,) * 6
DEFAULT_INERTIA = (1.0, 1.0, 1.0, 0.1, 0.1, 0.1)
DEFAULT_TIMEOUT_S = 10.0

STATUS_FIELDS = ("x_force", "y_force", "z_force", "translation_error", "rotation_error")


class InvalidSpec(ValueError):
    pass


def _vec6(v, name) -> np.ndarray:
    a = np.array(v, dtype=float).reshape(-1)
    if a.shape != (6,):
        raise InvalidSpec(f"{name} must have 6 components, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise InvalidSpec(f"{name} has non-finite components")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StiffnessSpec:
    max_cartesian_stiffness: np.ndarray = DEFAULT_STIFFNESS
    target_impedance: np.ndarray = DEFAULT_IMPEDANCE
    virtual_cartesian_inertia: np.ndarray = DEFAULT_INERTIA

    def __post_init__(self):
        k = _vec6(self.max_cartesian_stiffness, "max_cartesian_stiffness")
        imp = _vec6(self.target_impedance, "target_impedance")
        m = _vec6(self.virtual_cartesian_inertia, "virtual_cartesian_inertia")
        if np.any(k <= 0):
            raise InvalidSpec("stiffness components must be > 0")
        if np.any(m <= 0):
            raise InvalidSpec("inertia components must be > 0")
        if np.any(imp <= 0) or np.any(imp > 1):
            raise InvalidSpec(f"impedance components must lie in (0, 1], got {imp.tolist()}")
        object.__setattr__(self, "max_cartesian_stiffness", k)
        object.__setattr__(self, "target_impedance", imp)
        object.__setattr__(self, "virtual_cartesian_inertia", m)


@dataclass(frozen=True, eq=False)
class GainSet:
    K_p: np.ndarray
    K_d: np.ndarray
    M: np.ndarray


def synthesize_gains(spec: StiffnessSpec) -> GainSet:
    """Map a stiffness spec to critically damped diagonal gains."""
    K_p = spec.target_impedance * spec.max_cartesian_stiffness
    M = np.array(spec.virtual_cartesian_inertia, dtype=float)
    K_d = 2.0 * np.sqrt(K_p * M)
    return GainSet(K_p, K_d, M)


def gains_from_stiffness(K_p, M) -> GainSet:
    K_p = np.asarray(K_p, dtype=float)
    M = np.asarray(M, dtype=float)
    return GainSet(K_p, 2.0 * np.sqrt(K_p * M), M)


@dataclass(frozen=True)
class ControllerState:
    x: Pose
    x_dot: np.ndarray
    x_target: Pose
    x_dot_target: np.ndarray = field(default_factory=lambda: np.zeros(6))


@dataclass(frozen=True)
class ControllerStatus:
    x_force: float = 0.0
    y_force: float = 0.0
    z_force: float = 0.0
    translation_error: float = 0.0
    rotation_error: float = 0.0

    def as_tuple(self):
        return tuple(getattr(self, f) for f in STATUS_FIELDS)


@dataclass(frozen=True)
class ControlConfig:
    dt: float = 1e-3
    max_linear_speed: float = 0.25
    max_angular_speed: float = 1.5
    approx_eps: float = DEFAULT_APPROX_EPS
    # point-to-point executor
    ptp_stiffness: tuple = (2e4, 2e4, 2e4, 2e3, 2e3, 2e3)
    ptp_inertia: tuple = DEFAULT_INERTIA
    fault_force: float = 30.0
    ptp_tolerance: float = 5e-4
    ptp_rotation_tolerance: float = 0.01
    ptp_timeout_s: float = DEFAULT_TIMEOUT_S
    # keep every n-th status sample in the outcome trace (the final one is always kept)
    trace_every: int = 10

    def speed_limits(self) -> np.ndarray:
        return np.array([self.max_linear_speed] * 3 + [self.max_angular_speed] * 3)


DEFAULT_CONFIG = ControlConfig()


def pose_error_vector(x: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Per-axis error ``target - x`` with rotation components wrapped."""
    e = target - x
    e[3:] = wrap_angles(e[3:])
    return e


def _integrate(x, v, gains: GainSet, sensed, desired, dt, limits, target, v_target):
    e = pose_error_vector(x, target)
    a = (gains.K_p * e + gains.K_d * (v_target - v) + (desired - sensed)) / gains.M
    v_new = v + a * dt
    if limits is not None:
        np.clip(v_new, -limits, limits, out=v_new)
    x_new = x + v_new * dt
    x_new[3:] = wrap_angles(x_new[3:])
    return x_new, v_new


def admittance_step(
    state: ControllerState,
    gains: GainSet,
    sensed,
    desired,
    dt: float,
    limits=None,
) -> ControllerState:
    """One semi-implicit Euler step of the admittance law.

    ``sensed`` and ``desired`` are wrenches applied by the tool on the
    environment. ``limits`` optionally saturates the per-axis velocity.
    """
    if not (0.0 < dt <= 0.01):
        raise ValueError(f"dt must lie in (0, 0.01], got {dt}")
    x_new, v_new = _integrate(
        state.x.as_vector(),
        np.asarray(state.x_dot, dtype=float),
        gains,
        np.asarray(sensed, dtype=float),
        np.asarray(desired, dtype=float),
        dt,
        None if limits is None else np.asarray(limits, dtype=float),
        state.x_target.as_vector(),
        np.asarray(state.x_dot_target, dtype=float),
    )
    return ControllerState(Pose.from_vector(x_new), v_new, state.x_target, state.x_dot_target)


def _status_errors(x: np.ndarray, target: np.ndarray) -> tuple[float, float]:
    d = target[:3] - x[:3]
    te = math.sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
    if abs(x[3]) < 1e-12 and abs(x[4]) < 1e-12 and abs(target[3]) < 1e-12 and abs(target[4]) < 1e-12:
        dyaw = math.remainder(target[5] - x[5], 2.0 * math.pi)
        return te, abs(dyaw)
    R = rpy_to_matrix(x[3:]).T @ rpy_to_matrix(target[3:])
    return te, rotation_angle(R)


def read_status(world, target: np.ndarray) -> ControllerStatus:
    f = world.sensed_wrench()
    te, re = _status_errors(world.x, target)
    return ControllerStatus(float(f[0]), float(f[1]), float(f[2]), te, re)


class MoveStatus(enum.Enum):
    TERMINATED = "Terminated"
    TIMED_OUT = "TimedOut"
    FAULTED = "Faulted"


@dataclass(eq=False)
class MoveOutcome:
    status: MoveStatus
    final_status: ControllerStatus
    elapsed_s: float
    # rows of (t, x_force, y_force, z_force, translation_error, rotation_error)
    trace: np.ndarray

    def same_as(self, other: "MoveOutcome") -> bool:
        return (
            self.status is other.status
            and self.final_status == other.final_status
            and self.elapsed_s == other.elapsed_s
            and np.array_equal(self.trace, other.trace)
        )


@dataclass(frozen=True)
class MoveCommand:
    target: Pose
    stiffness: StiffnessSpec = field(default_factory=StiffnessSpec)
    termination: object = None
    timeout_s: float = DEFAULT_TIMEOUT_S
    tare_ft_sensor: bool = True
    desired_wrench: tuple = (0.0,) * 6

    def __post_init__(self):
        if not self.timeout_s > 0:
            raise InvalidSpec(f"timeout must be > 0, got {self.timeout_s}")


def tare_sensor(world) -> None:
    world.tare()


def _run_loop(world, target_pose: Pose, gains: GainSet, done, timeout_s, config, fault_force=None):
    dt = config.dt
    limits = config.speed_limits()
    target = target_pose.as_vector()
    v_target = np.zeros(6)
    desired = np.zeros(6)
    n_max = int(round(timeout_s / dt))
    rows = []
    every = max(1, config.trace_every)
    x, v = world.x.copy(), world.v.copy()
    step = 0
    result = MoveStatus.TIMED_OUT
    while True:
        raw = world.contact_wrench()
        f = world.tare_and_noise(raw)
        te, re = _status_errors(x, target)
        status = (float(f[0]), float(f[1]), float(f[2]), te, re)
        if step % every == 0:
            rows.append((step * dt,) + status)
        if fault_force is not None and math.sqrt(raw[0] ** 2 + raw[1] ** 2 + raw[2] ** 2) > fault_force:
            result = MoveStatus.FAULTED
            break
        if done(status):
            result = MoveStatus.TERMINATED
            break
        if step >= n_max:
            break
        x, v = _integrate(x, v, gains, -f, desired, dt, limits, target, v_target)
        world.set_state(x, v)
        world.clock += dt
        step += 1
    if step % every != 0:
        rows.append((step * dt,) + status)
    final = ControllerStatus(*status)
    return MoveOutcome(result, final, step * dt, np.array(rows, dtype=float))


def execute_compliant_move(world, cmd: MoveCommand, config: ControlConfig = DEFAULT_CONFIG) -> MoveOutcome:
    """Drive the flange toward ``cmd.target`` compliantly until the condition holds.

    Never faults; ends Terminated or TimedOut.
    """
    if cmd.tare_ft_sensor:
        world.tare()
    gains = synthesize_gains(cmd.stiffness)
    cond = cmd.termination
    eps = config.approx_eps
    names = STATUS_FIELDS

    if cond is None:
        def done(_):
            return False
    else:
        def done(status):
            return evaluate_condition(cond, dict(zip(names, status)), eps)

    return _run_loop(world, cmd.target, gains, done, cmd.timeout_s, config)


def execute_ptp_move(world, target: Pose, config: ControlConfig = DEFAULT_CONFIG) -> MoveOutcome:
    """Stiff position tracking; faults as soon as the contact force exceeds the limit."""
    gains = gains_from_stiffness(config.ptp_stiffness, config.ptp_inertia)
    tol, rtol = config.ptp_tolerance, config.ptp_rotation_tolerance

    def done(status):
        return status[3] <= tol and status[4] <= rtol

    return _run_loop(world, target, gains, done, config.ptp_timeout_s, config, fault_force=config.fault_force)
