"""Rigid-body poses as translation + roll/pitch/yaw.

Rotations use the extrinsic X-Y-Z convention: roll about the base x axis,
then pitch about the base y axis, then yaw about the base z axis, so that
``R = Rz(yaw) @ Ry(pitch) @ Rx(roll)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


class InvalidPose(ValueError):
    pass


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    r = math.remainder(a, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def wrap_angles(a: np.ndarray) -> np.ndarray:
    r = np.remainder(a + math.pi, TWO_PI) - math.pi
    # np.remainder lands on -pi exactly for odd multiples of pi
    return np.where(r <= -math.pi, r + TWO_PI, r)


def rpy_to_matrix(rpy) -> np.ndarray:
    r, p, y = rpy
    cr, sr = math.cos(r), math.sin(r)
    cp, sp = math.cos(p), math.sin(p)
    cy, sy = math.cos(y), math.sin(y)
    return np.array(
        [
            [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
            [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
            [-sp, cp * sr, cp * cr],
        ]
    )


def matrix_to_rpy(R: np.ndarray) -> np.ndarray:
    cp = math.hypot(R[0, 0], R[1, 0])
    pitch = math.atan2(-R[2, 0], cp)
    if cp < 1e-9:
        # gimbal lock: only yaw - roll (or yaw + roll) is observable; pin roll to 0
        roll = 0.0
        yaw = math.atan2(-R[0, 1], R[1, 1])
    else:
        roll = math.atan2(R[2, 1], R[2, 2])
        yaw = math.atan2(R[1, 0], R[0, 0])
    return wrap_angles(np.array([roll, pitch, yaw]))


def rotation_angle(R: np.ndarray) -> float:
    """Geodesic angle of a rotation matrix, in [0, pi]."""
    s = 0.5 * math.sqrt(
        (R[2, 1] - R[1, 2]) ** 2 + (R[0, 2] - R[2, 0]) ** 2 + (R[1, 0] - R[0, 1]) ** 2
    )
    c = 0.5 * (R[0, 0] + R[1, 1] + R[2, 2] - 1.0)
    return math.atan2(s, c)


@dataclass(frozen=True, eq=False)
class Pose:
    translation: np.ndarray
    rotation: np.ndarray

    def __post_init__(self):
        t = np.array(self.translation, dtype=float).reshape(3)
        r = np.array(self.rotation, dtype=float).reshape(3)
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(r))):
            raise InvalidPose(f"non-finite pose component: t={t}, rpy={r}")
        r = wrap_angles(r)
        t.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "rotation", r)

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.zeros(3), np.zeros(3))

    @classmethod
    def from_vector(cls, v) -> "Pose":
        v = np.asarray(v, dtype=float)
        return cls(v[:3], v[3:6])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.translation, self.rotation])

    def matrix(self) -> np.ndarray:
        return rpy_to_matrix(self.rotation)

    def multiply(self, other: "Pose") -> "Pose":
        return pose_multiply(self, other)

    def __mul__(self, other: "Pose") -> "Pose":
        return pose_multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, Pose):
            return NotImplemented
        return np.array_equal(self.translation, other.translation) and np.array_equal(
            self.rotation, other.rotation
        )

    def __hash__(self):
        return hash((tuple(self.translation), tuple(self.rotation)))

    def allclose(self, other: "Pose", atol: float = 1e-9) -> bool:
        dr = wrap_angles(self.rotation - other.rotation)
        return bool(
            np.allclose(self.translation, other.translation, atol=atol, rtol=0)
            and np.allclose(dr, 0.0, atol=atol, rtol=0)
        )

    def __repr__(self):
        t = ", ".join(f"{v:.6g}" for v in self.translation)
        r = ", ".join(f"{v:.6g}" for v in self.rotation)
        return f"Pose(t=[{t}], rpy=[{r}])"


@dataclass(frozen=True)
class PoseError:
    translation_error: float
    rotation_error: float


def pose_rpy(translation, rotation=(0.0, 0.0, 0.0)) -> Pose:
    return Pose(translation, rotation)


def pose_multiply(p: Pose, q: Pose) -> Pose:
    """Compose ``p * q``: apply ``q`` expressed in the frame of ``p``."""
    Rp = p.matrix()
    t = p.translation + Rp @ q.translation
    if not q.rotation.any():
        return Pose(t, p.rotation)
    if not p.rotation.any():
        return Pose(t, q.rotation)
    return Pose(t, matrix_to_rpy(Rp @ q.matrix()))


def pose_error(current: Pose, target: Pose) -> PoseError:
    dt = float(np.linalg.norm(target.translation - current.translation))
    R = current.matrix().T @ target.matrix()
    return PoseError(dt, rotation_angle(R))
