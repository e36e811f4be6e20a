"""Penalty-contact simulation of the benchmark scenes.

The flange is a 6-DoF point body driven by the controller. A held peg or
cable is rigidly attached at the flange origin, so the contact point is the
flange position. Contact state that depends on history (peg inside the bore,
cable threaded under the lip) is tracked explicitly and updated in
``set_state``.
"""
from __future__ import annotations

import math

import numpy as np

from ..pose_math import Pose, wrap_angle
from .tasks import Side, TaskKind, TaskSpec


class SimError(RuntimeError):
    pass


class GripperOccupied(SimError):
    pass


class NoSuchObject(SimError):
    pass


class NoSuchPose(SimError):
    pass


class InvalidArgument(SimError, ValueError):
    pass


class World:
    def __init__(self, spec: TaskSpec, seed: int):
        self.spec = spec
        self.rng_seed = int(seed)
        self.clock = 0.0
        self.x = np.zeros(6)
        self.v = np.zeros(6)
        self.ft_bias = np.zeros(6)
        self.grasped: str | None = None
        self.object_x = np.zeros(6)     # pose of the manipulated object (peg tip / cable point)
        self.env: dict = {}
        self.named: dict[int, Pose] = {}
        self.true_poses: dict[str, Pose] = {}
        self.estimates: dict[str, Pose] = {}
        self.pickable: set[str] = set()
        # history-dependent contact state
        self.in_bore = False
        self.threaded = False
        self.in_slot = False
        self.started_threaded = False
        self._noise_rng = np.random.default_rng([self.rng_seed, 1])

    # ----------------------------------------------------------------- state
    @property
    def flange(self) -> Pose:
        return Pose.from_vector(self.x)

    def set_state(self, x, v) -> None:
        self.x = np.array(x, dtype=float)
        self.v = np.array(v, dtype=float)
        if self.grasped is not None:
            self.object_x = self.x.copy()
            self._update_contact_mode()

    def place_flange(self, pose: Pose) -> None:
        """Teleport the flange (scripted positioning), updating contact modes."""
        self.set_state(pose.as_vector(), np.zeros(6))

    def _update_contact_mode(self) -> None:
        kind = self.spec.kind
        x = self.object_x
        if self.spec.is_peg_task:
            depth = self.env["surface_z"] - x[2]
            if self.in_bore:
                if depth <= 0:
                    self.in_bore = False
            elif depth > 0 and self._peg_aligned(x):
                self.in_bore = True
        elif kind in (TaskKind.CABLE_UNROUTE, TaskKind.CABLE_ROUTE):
            g = self.spec.cable
            cx, cz = x[0], x[2]
            if self.threaded:
                if self.in_slot:
                    if cz < g.lip_z:
                        self.in_slot = False
                    elif cz > g.lip_top:
                        self.in_slot = False
                        self.threaded = False
                elif cz > g.lip_z and g.in_window(cx):
                    self.in_slot = True
                    if cz > g.lip_top:
                        self.in_slot = False
                        self.threaded = False
            elif cz < g.lip_top and g.in_window(cx):
                self.threaded = True
                self.in_slot = cz >= g.lip_z

    def _peg_lateral(self, x) -> np.ndarray:
        return x[:2] - self.env["hole_xy"]

    def _peg_yaw_error(self, x) -> float:
        return wrap_angle(x[5] + self.env["peg_rotation"] - self.env["hole_yaw"])

    def _peg_aligned(self, x) -> bool:
        lateral = float(np.hypot(*self._peg_lateral(x)))
        return lateral <= self.spec.peg.clearance and self.spec.symmetry.aligned(self._peg_yaw_error(x))

    # --------------------------------------------------------------- contact
    def contact_wrench(self) -> np.ndarray:
        """Reaction wrench on the flange from the environment (base frame)."""
        w = np.zeros(6)
        if self.grasped is None:
            if self.spec.is_peg_task:
                self._surface(w, self.x, self.v)
            return w
        if self.spec.is_peg_task:
            self._peg_contact(w)
        else:
            self._cable_contact(w)
        return w

    def _penalty(self, depth: float, rate: float) -> float:
        """Normal force for a penetration depth (m) growing at ``rate`` (m/s)."""
        c = self.spec.contact
        return max(0.0, c.k_env * depth + c.c_env * rate)

    def _surface(self, w, x, v) -> None:
        depth = self.env["surface_z"] - x[2]
        if depth > 0:
            w[2] += self._penalty(depth, -v[2])

    def _peg_contact(self, w) -> None:
        x, v = self.object_x, self.v
        if not self.in_bore:
            self._surface(w, x, v)
            return
        p = self.spec.peg
        c = self.spec.contact
        lat = self._peg_lateral(x)
        r = float(np.hypot(*lat))
        if r > p.clearance:
            n = lat / r
            f = self._penalty(r - p.clearance, float(n @ v[:2]))
            w[0] -= f * n[0]
            w[1] -= f * n[1]
        bottom = self.env["surface_z"] - p.bore_depth
        if x[2] < bottom:
            w[2] += self._penalty(bottom - x[2], -v[2])
        sym = self.spec.symmetry
        if sym.period > 0:
            s = sym.signed_error(self._peg_yaw_error(x))
            excess = abs(s) - sym.alignment_tolerance
            if excess > 0:
                sgn = 1.0 if s > 0 else -1.0
                tau = max(0.0, c.k_env_rot * excess + c.c_env_rot * sgn * v[5])
                w[5] -= sgn * tau

    def _cable_contact(self, w) -> None:
        g = self.spec.cable
        x, v = self.object_x, self.v
        cx, cz = x[0], x[2]
        if self.threaded:
            if self.in_slot:
                if cx < g.window_lo:
                    w[0] += self._penalty(g.window_lo - cx, -v[0])
                elif cx > g.window_hi:
                    w[0] -= self._penalty(cx - g.window_hi, v[0])
                return
            if cz < g.floor_z:
                w[2] += self._penalty(g.floor_z - cz, -v[2])
            if cx < g.right_wall_x:
                w[0] += self._penalty(g.right_wall_x - cx, -v[0])
            elif cx > g.left_wall_x:
                w[0] -= self._penalty(cx - g.left_wall_x, v[0])
            if cz > g.lip_z and not g.in_window(cx):
                w[2] -= self._penalty(cz - g.lip_z, v[2])
        elif cz < g.lip_top and not g.in_window(cx):
            # the tunnel top is flush with the surrounding board
            w[2] += self._penalty(g.lip_top - cz, -v[2])

    # ---------------------------------------------------------------- sensor
    def tare(self) -> None:
        self.ft_bias = self.contact_wrench()

    def tare_and_noise(self, raw: np.ndarray) -> np.ndarray:
        f = raw - self.ft_bias
        std = self.spec.contact.ft_noise_std
        if std > 0:
            f[:3] += self._noise_rng.normal(0.0, std, 3)
        return f

    def sensed_wrench(self) -> np.ndarray:
        return self.tare_and_noise(self.contact_wrench())

    # ------------------------------------------------------------ affordances
    def pick_up(self, object_id: str) -> None:
        if object_id not in self.pickable:
            raise NoSuchObject(f"no pickable object {object_id!r} in {self.spec.name}")
        if self.grasped is not None:
            raise GripperOccupied(f"already holding {self.grasped!r}")
        self.grasped = object_id
        self.set_state(self.x, self.v)

    def grasp_cable(self) -> None:
        if not self.spec.is_cable_task:
            raise NoSuchObject(f"no cable in {self.spec.name}")
        if self.grasped is not None:
            raise GripperOccupied(f"already holding {self.grasped!r}")
        self.grasped = "cable"
        self.x = self.object_x.copy()
        self.v = np.zeros(6)

    def move_gripper(self, percent_open: float) -> None:
        if not (0.0 <= percent_open <= 100.0) or math.isnan(percent_open):
            raise InvalidArgument(f"percent_open must lie in [0, 100], got {percent_open}")
        if percent_open >= 50.0:
            self.grasped = None

    def estimate_and_update_pose(self, object_id: str) -> Pose:
        if object_id not in self.true_poses:
            raise NoSuchObject(f"no object {object_id!r} to estimate in {self.spec.name}")
        if object_id not in self.estimates:
            self.estimates[object_id] = self.true_poses[object_id]
        return self.estimates[object_id]

    def named_pose(self, index: int) -> Pose:
        try:
            return self.named[int(index)]
        except KeyError:
            raise NoSuchPose(f"pose({index}) is not defined for {self.spec.name}") from None

    def kinetic_energy(self, masses=(1.0, 1.0, 1.0, 0.1, 0.1, 0.1)) -> float:
        return 0.5 * float(np.dot(masses, self.v * self.v))


def spawn_task(spec: TaskSpec, seed: int) -> World:
    """Instantiate a world with randomization drawn from ``seed``."""
    world = World(spec, seed)
    rng = np.random.default_rng([int(seed), 0])
    kind = spec.kind
    if spec.is_peg_task:
        p = spec.peg
        if kind is TaskKind.FMB_INSERTION:
            period = spec.symmetry.period
            if period == 0:
                rot = 0.0
            elif period == 2 * math.pi:
                rot = float(rng.choice([0.0, math.pi]))
            else:
                rot = float(rng.uniform(0.0, period))
            hole_xy = np.zeros(2)
            est_noise = np.zeros(3)
            world.pickable = {"peg"}
            hole_name = "hole"
        else:
            rot = 0.0
            if p.placement_range > 0:
                r = p.placement_range * math.sqrt(rng.uniform())
                a = rng.uniform(-math.pi, math.pi)
                hole_xy = np.array([r * math.cos(a), r * math.sin(a)])
            else:
                hole_xy = np.zeros(2)
            est_noise = spec.perception.sample(rng)
            world.pickable = {"plug"}
            hole_name = "socket"
        world.env = {"surface_z": 0.0, "hole_xy": hole_xy, "hole_yaw": 0.0, "peg_rotation": rot}
        true = Pose([hole_xy[0], hole_xy[1], 0.0], [0, 0, 0])
        world.true_poses[hole_name] = true
        if np.any(est_noise):
            world.estimates[hole_name] = Pose(true.translation + est_noise, true.rotation)
        # scripted positioning: above the nominal insertion point
        world.named[0] = Pose([0.0, 0.0, p.start_height], [0, 0, 0])
        world.named[1] = Pose([0.0, 0.0, -p.reference_depth], [0, 0, 0])
        world.place_flange(world.named[0])
        world.object_x = world.x.copy()
    else:
        g = spec.cable
        side = spec.side or (Side.LEFT if rng.uniform() < 0.5 else Side.RIGHT)
        if kind is TaskKind.CABLE_UNROUTE:
            mag = rng.uniform(g.unroute_offset_min, g.unroute_offset_max)
            start = np.array([side.sign * mag, 0.0, g.lip_z - g.unroute_start_depth])
            world.threaded = True
            world.started_threaded = True
        else:
            mag = rng.uniform(g.route_offset_min, g.route_offset_max)
            start = np.array([g.window_center + side.sign * mag, 0.0, g.lip_top + g.route_start_height])
        world.env = {"side": side, "start_offset": float(mag)}
        world.true_poses["tunnel"] = Pose([0.0, 0.0, g.lip_z], [0, 0, 0])
        world.named[1] = Pose(start, [0, 0, 0])
        world.x = np.concatenate([start, np.zeros(3)])
        world.object_x = world.x.copy()
    return world


def check_success(world: World, spec: TaskSpec | None = None) -> bool:
    spec = spec or world.spec
    x = world.object_x
    if spec.is_peg_task:
        if not world.in_bore:
            return False
        p = spec.peg
        slack = 1.0 + p.wall_slack
        depth = world.env["surface_z"] - x[2]
        lateral = float(np.hypot(*world._peg_lateral(x)))
        rot = spec.symmetry.error(world._peg_yaw_error(x))
        return (
            depth >= p.required_depth - 1e-12
            and rot <= p.alignment_tolerance * slack
            and lateral <= p.clearance * slack
        )
    g = spec.cable
    if spec.kind is TaskKind.CABLE_UNROUTE:
        return world.started_threaded and not world.threaded and x[2] >= g.z_free
    return (
        world.threaded
        and not world.in_slot
        and x[2] < g.lip_z
        and g.right_wall_x <= x[0] <= g.left_wall_x
    )
