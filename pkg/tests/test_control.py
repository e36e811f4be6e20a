import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compliant_codegen.conditions import CompareOp, Comparison
from compliant_codegen.control import (
    DEFAULT_CONFIG,
    ControlConfig,
    ControllerState,
    InvalidSpec,
    MoveCommand,
    MoveStatus,
    StiffnessSpec,
    admittance_step,
    execute_compliant_move,
    execute_ptp_move,
    gains_from_stiffness,
    synthesize_gains,
)
from compliant_codegen.pose_math import Pose
from compliant_codegen.sim import spawn_task, task_spec

K_E = 1e4


def surface_world():
    """Empty gripper over the FMB board: the flange only meets the flat surface at z = 0."""
    return spawn_task(task_spec("fmb-circle"), 0)


def press_force_closed_form(k_p, d, k_e=K_E):
    delta = k_p * d / (k_p + k_e)
    return k_e * delta, delta


def simulate_step(k_p, step, m=1.0, dt=1e-3, t_end=2.0, limits=None):
    gains = gains_from_stiffness([k_p] * 6, [m] * 6)
    state = ControllerState(Pose.identity(), np.zeros(6), Pose([0, 0, step], [0, 0, 0]))
    zs = []
    for _ in range(int(t_end / dt)):
        state = admittance_step(state, gains, np.zeros(6), np.zeros(6), dt, limits)
        zs.append(state.x.translation[2])
    return np.array(zs)


def test_gain_synthesis():
    spec = StiffnessSpec([400, 400, 400, 40, 40, 40], [0.5, 1, 1, 1, 1, 0.25], [1, 1, 1, 0.1, 0.1, 0.1])
    g = synthesize_gains(spec)
    np.testing.assert_allclose(g.K_p, [200, 400, 400, 40, 40, 10])
    np.testing.assert_allclose(g.K_d, 2 * np.sqrt(g.K_p * g.M))


@pytest.mark.parametrize("kw", [
    dict(max_cartesian_stiffness=[400, 400, -1, 40, 40, 40]),
    dict(target_impedance=[1, 1, 1, 1, 1, 1.5]),
    dict(target_impedance=[0, 1, 1, 1, 1, 1]),
    dict(virtual_cartesian_inertia=[1, 1, 0, 0.1, 0.1, 0.1]),
    dict(max_cartesian_stiffness=[400, 400, 400]),
    dict(max_cartesian_stiffness=[400, 400, math.nan, 40, 40, 40]),
])
def test_invalid_stiffness_spec(kw):
    with pytest.raises(InvalidSpec):
        StiffnessSpec(**kw)


@pytest.mark.parametrize("dt", [0.0, -1e-3, 0.02])
def test_admittance_step_rejects_bad_dt(dt):
    g = gains_from_stiffness([400] * 6, [1] * 6)
    s = ControllerState(Pose.identity(), np.zeros(6), Pose.identity())
    with pytest.raises(ValueError):
        admittance_step(s, g, np.zeros(6), np.zeros(6), dt)


def test_rest_at_target_stays_put():
    g = gains_from_stiffness([400] * 6, [1] * 6)
    s = ControllerState(Pose([0.1, 0, 0], [0, 0, 0.3]), np.zeros(6), Pose([0.1, 0, 0], [0, 0, 0.3]))
    for _ in range(100):
        s = admittance_step(s, g, np.zeros(6), np.zeros(6), 1e-3)
    assert s.x == Pose([0.1, 0, 0], [0, 0, 0.3])
    assert not np.any(s.x_dot)


def test_single_step_matches_law():
    # a = M^-1 (K_p e + K_d (0 - v) + (f_d - f_s)), v' = v + a dt, x' = x + v' dt
    g = gains_from_stiffness([400] * 6, [2] * 6)
    v0 = np.array([0.01, 0, 0, 0, 0, 0])
    s = ControllerState(Pose.identity(), v0, Pose([0.01, 0, 0], [0, 0, 0]))
    f_s = np.array([1.0, 0, 0, 0, 0, 0])
    out = admittance_step(s, g, f_s, np.zeros(6), 1e-3)
    a = (400 * 0.01 + g.K_d[0] * (-0.01) - 1.0) / 2
    v1 = 0.01 + a * 1e-3
    assert out.x_dot[0] == pytest.approx(v1)
    assert out.x.translation[0] == pytest.approx(v1 * 1e-3)


def test_velocity_is_saturated():
    zs = simulate_step(400, 1.0, t_end=0.5, limits=DEFAULT_CONFIG.speed_limits())
    assert np.max(np.diff(zs)) <= 0.25 * 1e-3 + 1e-15


def test_free_space_step_has_no_overshoot():
    zs = simulate_step(400, 0.01)
    assert zs.max() <= 0.01 * 1.01
    assert zs[-1] == pytest.approx(0.01, rel=1e-3)


@settings(max_examples=25, deadline=None)
@given(st.floats(50, 5000), st.floats(0.001, 0.05), st.floats(0.5, 5))
def test_critically_damped_overshoot_property(k_p, step, m):
    zs = simulate_step(k_p, step, m=m, t_end=3.0)
    assert zs.max() <= step * 1.01


def test_steady_press_force_closed_form():
    # target 5 mm below a k_e = 1e4 N/m surface with K_p = 400
    world = surface_world()
    target = Pose([0, 0, -0.005], [0, 0, 0])
    out = execute_compliant_move(world, MoveCommand(target, timeout_s=2.0))
    force, delta = press_force_closed_form(400.0, 0.005)
    assert force == pytest.approx(1.923, abs=1e-3)
    assert delta == pytest.approx(1.923e-4, rel=1e-3)
    assert out.status is MoveStatus.TIMED_OUT
    assert out.final_status.z_force == pytest.approx(force, rel=0.01)
    assert -world.x[2] == pytest.approx(delta, rel=0.01)


def test_tare_in_free_space_reads_zero():
    world = surface_world()
    world.tare()
    np.testing.assert_array_equal(world.sensed_wrench(), np.zeros(6))


def test_tare_in_contact_offsets_readings():
    world = surface_world()
    execute_compliant_move(world, MoveCommand(Pose([0, 0, -0.005], [0, 0, 0]), timeout_s=1.0))
    before = world.sensed_wrench()[2]
    world.tare()
    assert before > 1.5
    assert world.sensed_wrench()[2] == pytest.approx(0.0, abs=1e-12)


def test_condition_terminates_move():
    world = surface_world()
    cond = Comparison(CompareOp.GE, "z_force", 0.4)
    out = execute_compliant_move(world, MoveCommand(Pose([0, 0, -0.01], [0, 0, 0]), termination=cond))
    assert out.status is MoveStatus.TERMINATED
    assert out.final_status.z_force >= 0.4
    assert out.elapsed_s < 1.0
    # trace rows: (t, fx, fy, fz, translation_error, rotation_error), last row is the final status
    assert out.trace.shape[1] == 6
    assert tuple(out.trace[-1, 1:]) == out.final_status.as_tuple()


def test_timeout_without_condition():
    world = surface_world()
    out = execute_compliant_move(world, MoveCommand(world.named[0], timeout_s=0.05))
    assert out.status is MoveStatus.TIMED_OUT
    assert out.elapsed_s == pytest.approx(0.05)


def test_move_command_rejects_bad_timeout():
    with pytest.raises(InvalidSpec):
        MoveCommand(Pose.identity(), timeout_s=0)


def test_ptp_free_space_reaches_target():
    world = surface_world()
    out = execute_ptp_move(world, Pose([0.01, 0, 0.01], [0, 0, 0.2]))
    assert out.status is MoveStatus.TERMINATED
    assert out.final_status.translation_error <= DEFAULT_CONFIG.ptp_tolerance
    assert out.final_status.rotation_error <= DEFAULT_CONFIG.ptp_rotation_tolerance


def test_ptp_into_surface_faults():
    world = surface_world()
    out = execute_ptp_move(world, Pose([0, 0, -0.01], [0, 0, 0]))
    assert out.status is MoveStatus.FAULTED


def test_compliant_move_into_surface_never_faults():
    world = surface_world()
    out = execute_compliant_move(world, MoveCommand(Pose([0, 0, -0.05], [0, 0, 0]), timeout_s=1.0))
    assert out.status is MoveStatus.TIMED_OUT


def test_moves_are_deterministic():
    outs = []
    for _ in range(2):
        world = surface_world()
        outs.append(execute_compliant_move(world, MoveCommand(Pose([0.002, 0, -0.005], [0, 0, 0.1]), timeout_s=0.5)))
    assert outs[0].same_as(outs[1])


def test_finer_timestep_agrees():
    world = surface_world()
    cfg = ControlConfig(dt=5e-4)
    out = execute_compliant_move(world, MoveCommand(Pose([0, 0, -0.005], [0, 0, 0]), timeout_s=2.0), cfg)
    force, _ = press_force_closed_form(400.0, 0.005)
    assert out.final_status.z_force == pytest.approx(force, rel=0.01)
