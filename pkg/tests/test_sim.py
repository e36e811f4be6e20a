import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from compliant_codegen.pose_math import Pose
from compliant_codegen.sim import spawn_task, task_spec
from compliant_codegen.sim.tasks import (
    TASK_NAMES,
    PerceptionNoiseModel,
    ShapeSymmetry,
    Side,
    TaskDefaults,
    load_task_config,
)
from compliant_codegen.sim.world import (
    GripperOccupied,
    InvalidArgument,
    NoSuchObject,
    NoSuchPose,
    check_success,
)

DATA = Path(__file__).resolve().parents[1] / "src" / "compliant_codegen" / "data"


@pytest.mark.parametrize("name", TASK_NAMES)
def test_spawn_is_deterministic(name):
    a, b = spawn_task(task_spec(name), 7), spawn_task(task_spec(name), 7)
    np.testing.assert_array_equal(a.x, b.x)
    assert a.named == b.named
    assert a.estimates == b.estimates
    assert a.true_poses == b.true_poses


def test_spawn_differs_across_seeds():
    xs = {tuple(spawn_task(task_spec("rgmc-unroute"), s).x) for s in range(20)}
    assert len(xs) == 20
    rots = {spawn_task(task_spec("fmb-star"), s).env["peg_rotation"] for s in range(20)}
    assert len(rots) == 20


def test_halfpipe_rotation_is_zero_or_half_turn():
    rots = {spawn_task(task_spec("fmb-halfpipe"), s).env["peg_rotation"] for s in range(40)}
    assert rots == {0.0, math.pi}


def test_star_rotation_within_one_period():
    for s in range(50):
        r = spawn_task(task_spec("fmb-star"), s).env["peg_rotation"]
        assert 0.0 <= r < math.pi / 2


def test_perception_offsets_bounded_over_1000_spawns():
    spec = task_spec("nist-connector-perception")
    offsets = []
    for s in range(1000):
        w = spawn_task(spec, s)
        est = w.estimate_and_update_pose("socket")
        offsets.append(np.linalg.norm(est.translation - w.true_poses["socket"].translation))
    offsets = np.array(offsets)
    assert offsets.max() <= 0.004
    # a disk-uniform draw has median radius r_max / sqrt(2)
    assert np.median(offsets) == pytest.approx(0.004 / math.sqrt(2), rel=0.1)


@given(st.integers(0, 2**31 - 1))
def test_perception_sample_is_planar_and_bounded(seed):
    off = PerceptionNoiseModel(0.004).sample(np.random.default_rng(seed))
    assert off[2] == 0.0
    assert np.hypot(off[0], off[1]) <= 0.004


def test_exact_connector_has_no_estimation_error():
    w = spawn_task(task_spec("nist-connector"), 3)
    assert w.estimate_and_update_pose("socket") == w.true_poses["socket"]


def test_estimate_is_cached_per_rollout():
    w = spawn_task(task_spec("nist-connector-perception"), 3)
    assert w.estimate_and_update_pose("socket") is w.estimate_and_update_pose("socket")


def test_affordance_errors():
    w = spawn_task(task_spec("fmb-circle"), 0)
    with pytest.raises(NoSuchObject):
        w.pick_up("plug")
    w.pick_up("peg")
    with pytest.raises(GripperOccupied):
        w.pick_up("peg")
    with pytest.raises(NoSuchPose):
        w.named_pose(9)
    with pytest.raises(NoSuchObject):
        w.grasp_cable()
    with pytest.raises(NoSuchObject):
        w.estimate_and_update_pose("tunnel")
    for bad in (-1.0, 100.5, math.nan):
        with pytest.raises(InvalidArgument):
            w.move_gripper(bad)


def test_gripper_opening_releases():
    w = spawn_task(task_spec("fmb-circle"), 0)
    w.pick_up("peg")
    w.move_gripper(49.0)
    assert w.grasped == "peg"
    w.move_gripper(50.0)
    assert w.grasped is None


def test_unroute_starts_under_the_lip():
    for s in range(10):
        w = spawn_task(task_spec("rgmc-unroute"), s)
        g = w.spec.cable
        assert w.threaded and not w.in_slot
        assert w.x[2] < g.lip_z
        assert not g.in_window(w.x[0])
        assert w.named_pose(1).allclose(w.flange, 0.0)


def test_side_override():
    for side in Side:
        spec = task_spec("rgmc-unroute", side=side)
        for s in range(5):
            w = spawn_task(spec, s)
            assert w.env["side"] is side
            assert np.sign(w.x[0]) == side.sign


def test_peg_success_predicate():
    w = spawn_task(task_spec("fmb-circle"), 0)
    w.pick_up("peg")
    assert not check_success(w)
    w.place_flange(Pose([0, 0, -0.005], [0, 0, 0]))
    assert w.in_bore and not check_success(w)
    w.place_flange(Pose([0.0005, 0, -0.011], [0, 0, 0]))
    assert check_success(w)


def test_peg_must_be_aligned_to_enter():
    spec = task_spec("fmb-star")
    w = spawn_task(spec, 0)
    rot = w.env["peg_rotation"]
    w.pick_up("peg")
    misaligned = math.pi / 4 - rot
    w.place_flange(Pose([0, 0, -0.002], [0, 0, misaligned]))
    assert not w.in_bore
    # pressing into the surface pushes back
    assert w.contact_wrench()[2] == pytest.approx(20.0)
    w.place_flange(Pose([0, 0, 0.001], [0, 0, 0]))
    w.place_flange(Pose([0, 0, -0.002], [0, 0, -rot]))
    assert w.in_bore


def test_peg_outside_clearance_stays_on_surface():
    w = spawn_task(task_spec("fmb-circle"), 0)
    w.pick_up("peg")
    w.place_flange(Pose([0.003, 0, -0.001], [0, 0, 0]))
    assert not w.in_bore


def test_unroute_success_needs_lifting_through_window():
    w = spawn_task(task_spec("rgmc-unroute", side=Side.LEFT), 0)
    g = w.spec.cable
    w.grasp_cable()
    assert not check_success(w)
    # straight up outside the window: blocked by the lip, never released
    w.set_state([0.002, 0, g.lip_z + 0.001, 0, 0, 0], np.zeros(6))
    assert w.threaded and not check_success(w)
    assert w.contact_wrench()[2] < 0
    w.set_state([0.002, 0, g.lip_z - 0.001, 0, 0, 0], np.zeros(6))
    w.set_state([g.window_center, 0, g.lip_z - 0.001, 0, 0, 0], np.zeros(6))
    w.set_state([g.window_center, 0, g.lip_z + 0.001, 0, 0, 0], np.zeros(6))
    assert w.in_slot
    w.set_state([g.window_center, 0, g.z_free, 0, 0, 0], np.zeros(6))
    assert not w.threaded
    assert check_success(w)


def test_route_success_needs_threading_through_window():
    w = spawn_task(task_spec("rgmc-route"), 0)
    g = w.spec.cable
    w.grasp_cable()
    assert not w.threaded
    # pushing down beside the window hits the flush board
    w.set_state([g.window_hi + 0.003, 0, g.lip_top - 0.001, 0, 0, 0], np.zeros(6))
    assert not w.threaded and w.contact_wrench()[2] > 0
    w.set_state([g.window_center, 0, g.lip_top + 0.001, 0, 0, 0], np.zeros(6))
    w.set_state([g.window_center, 0, g.lip_top - 0.001, 0, 0, 0], np.zeros(6))
    assert w.threaded and w.in_slot and not check_success(w)
    w.set_state([g.window_center, 0, g.lip_z - 0.001, 0, 0, 0], np.zeros(6))
    assert check_success(w)


def test_symmetry_folding():
    star = ShapeSymmetry(math.pi / 2, 0.1)
    assert star.error(math.pi / 2 + 0.05) == pytest.approx(0.05)
    assert star.aligned(-math.pi / 2 - 0.09)
    assert not star.aligned(math.pi / 4)
    half = ShapeSymmetry(2 * math.pi, 0.1)
    assert half.error(math.pi) == pytest.approx(math.pi)
    assert ShapeSymmetry(0.0, 0.1).aligned(1.234)
    with pytest.raises(ValueError):
        ShapeSymmetry(1.0, 0.1)


def test_shipped_config_equals_defaults():
    assert load_task_config(DATA / "default_tasks.ini") == TaskDefaults()


def test_config_rejects_unknown_keys(tmp_path):
    p = tmp_path / "bad.ini"
    p.write_text("[peg]\nwobble = 1\n")
    with pytest.raises(ValueError):
        load_task_config(p)
    p.write_text("[gears]\nclearance = 1\n")
    with pytest.raises(ValueError):
        load_task_config(p)


def test_config_override_changes_geometry(tmp_path):
    p = tmp_path / "wide.ini"
    p.write_text("[peg]\nclearance = 0.003\n")
    spec = task_spec("fmb-circle", load_task_config(p))
    assert spec.peg.clearance == 0.003
    assert spec.cable == task_spec("fmb-circle").cable


def test_unknown_task_name():
    with pytest.raises(KeyError):
        task_spec("fmb-hexagon")
