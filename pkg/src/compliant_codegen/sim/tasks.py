"""Benchmark task definitions: geometry, randomization and success parameters.

Defaults are embedded; any value can be overridden from an INI-style file
(see ``load_task_config`` and ``data/default_tasks.ini`` for the schema).
"""
from __future__ import annotations

import configparser
import enum
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np


class TaskKind(enum.Enum):
    FMB_INSERTION = "fmb_insertion"
    CABLE_UNROUTE = "cable_unroute"
    CABLE_ROUTE = "cable_route"
    CONNECTOR_INSERTION = "connector_insertion"


class PegShape(enum.Enum):
    CIRCLE = "circle"
    STAR = "star"
    HALF_PIPE = "half_pipe"


class Side(enum.Enum):
    LEFT = "left"     # +x
    RIGHT = "right"   # -x

    @property
    def sign(self) -> float:
        return 1.0 if self is Side.LEFT else -1.0


@dataclass(frozen=True)
class ShapeSymmetry:
    """Rotational symmetry of a peg cross-section about z.

    ``period == 0`` means every rotation is valid (circle).
    """

    period: float
    alignment_tolerance: float

    def __post_init__(self):
        if self.period not in (0.0, math.pi / 2, 2 * math.pi):
            raise ValueError(f"unsupported symmetry period {self.period}")
        if self.period > 0 and not (0 < self.alignment_tolerance <= self.period / 4):
            raise ValueError("alignment tolerance must lie in (0, period/4]")

    def signed_error(self, angle: float) -> float:
        """Rotation error folded into (-period/2, period/2]."""
        if self.period == 0:
            return 0.0
        r = math.remainder(angle, self.period)
        return self.period / 2 if r <= -self.period / 2 else r

    def error(self, angle: float) -> float:
        return abs(self.signed_error(angle))

    def aligned(self, angle: float) -> bool:
        return self.period == 0 or self.error(angle) <= self.alignment_tolerance


SHAPE_PERIODS = {
    PegShape.CIRCLE: 0.0,
    PegShape.STAR: math.pi / 2,
    PegShape.HALF_PIPE: 2 * math.pi,
}


@dataclass(frozen=True)
class PerceptionNoiseModel:
    max_offset: float = 0.004

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """Uniform planar offset inside a disk of radius ``max_offset``."""
        r = self.max_offset * math.sqrt(rng.uniform())
        a = rng.uniform(-math.pi, math.pi)
        return np.array([r * math.cos(a), r * math.sin(a), 0.0])


@dataclass(frozen=True)
class ContactParams:
    k_env: float = 1e4          # N/m
    c_env: float = 50.0         # N s/m
    k_env_rot: float = 1e4      # N m/rad, bore keying
    c_env_rot: float = 5.0      # N m s/rad
    ft_noise_std: float = 0.0   # N, per force axis


@dataclass(frozen=True)
class PegGeometry:
    clearance: float = 0.0015
    alignment_tolerance: float = 0.1
    required_depth: float = 0.010
    bore_depth: float = 0.025
    start_height: float = 0.005
    reference_depth: float = 0.005     # pose(1) lies this far below the surface
    # allowance for penalty penetration of the bore walls when judging success
    wall_slack: float = 0.25
    placement_range: float = 0.0       # random true-socket offset radius (perception runs)
    perception_max_offset: float = 0.004


@dataclass(frozen=True)
class CableGeometry:
    right_wall_x: float = -0.020
    left_wall_x: float = 0.020
    floor_z: float = 0.0
    lip_z: float = 0.008               # underside of the lip
    lip_thickness: float = 0.003
    window_lo: float = 0.0045          # opening in the lip, x range
    window_hi: float = 0.0125
    free_margin: float = 0.002         # success height above the lip top
    unroute_start_depth: float = 0.001  # start this far under the lip
    unroute_offset_min: float = 0.002
    unroute_offset_max: float = 0.003
    route_start_height: float = 0.003  # above the lip top
    route_offset_min: float = 0.006
    route_offset_max: float = 0.008

    @property
    def lip_top(self) -> float:
        return self.lip_z + self.lip_thickness

    @property
    def z_free(self) -> float:
        return self.lip_top + self.free_margin

    @property
    def window_center(self) -> float:
        return 0.5 * (self.window_lo + self.window_hi)

    def in_window(self, x: float) -> bool:
        return self.window_lo <= x <= self.window_hi


@dataclass(frozen=True)
class TaskSpec:
    kind: TaskKind
    shape: PegShape | None = None
    use_perception: bool = False
    peg: PegGeometry = field(default_factory=PegGeometry)
    cable: CableGeometry = field(default_factory=CableGeometry)
    contact: ContactParams = field(default_factory=ContactParams)
    # cable start side; None draws it from the seed
    side: Side | None = None

    def __post_init__(self):
        for g in (self.peg, self.cable, self.contact):
            for f in fields(g):
                v = getattr(g, f.name)
                if not math.isfinite(v):
                    raise ValueError(f"{f.name} must be finite")
        p = self.peg
        if min(p.clearance, p.required_depth, p.bore_depth, p.alignment_tolerance) <= 0:
            raise ValueError("peg clearances and depths must be > 0")
        c = self.cable
        if c.window_hi <= c.window_lo or c.lip_thickness <= 0 or c.left_wall_x <= c.right_wall_x:
            raise ValueError("cable channel geometry must have positive extents")
        if self.kind is TaskKind.FMB_INSERTION and self.shape is None:
            raise ValueError("FMB insertion needs a peg shape")

    @property
    def name(self) -> str:
        if self.kind is TaskKind.FMB_INSERTION:
            return {"circle": "fmb-circle", "star": "fmb-star", "half_pipe": "fmb-halfpipe"}[self.shape.value]
        if self.kind is TaskKind.CABLE_UNROUTE:
            return "rgmc-unroute"
        if self.kind is TaskKind.CABLE_ROUTE:
            return "rgmc-route"
        return "nist-connector-perception" if self.use_perception else "nist-connector"

    @property
    def symmetry(self) -> ShapeSymmetry:
        if self.kind is TaskKind.FMB_INSERTION:
            period = SHAPE_PERIODS[self.shape]
        else:
            period = 0.0
        return ShapeSymmetry(period, self.peg.alignment_tolerance)

    @property
    def perception(self) -> PerceptionNoiseModel:
        return PerceptionNoiseModel(self.peg.perception_max_offset if self.use_perception else 0.0)

    @property
    def is_peg_task(self) -> bool:
        return self.kind in (TaskKind.FMB_INSERTION, TaskKind.CONNECTOR_INSERTION)

    @property
    def is_cable_task(self) -> bool:
        return self.kind in (TaskKind.CABLE_UNROUTE, TaskKind.CABLE_ROUTE)

    @property
    def is_search_task(self) -> bool:
        """Whether success needs lateral or rotational exploration."""
        return not (self.kind is TaskKind.FMB_INSERTION and self.shape is PegShape.CIRCLE)


TASK_NAMES = (
    "fmb-circle",
    "fmb-star",
    "fmb-halfpipe",
    "rgmc-unroute",
    "rgmc-route",
    "nist-connector",
    "nist-connector-perception",
)


@dataclass(frozen=True)
class TaskDefaults:
    peg: PegGeometry = field(default_factory=PegGeometry)
    connector: PegGeometry = field(
        default_factory=lambda: PegGeometry(clearance=0.001, placement_range=0.01, start_height=0.02)
    )
    cable: CableGeometry = field(default_factory=CableGeometry)
    contact: ContactParams = field(default_factory=ContactParams)


def task_spec(name: str, defaults: TaskDefaults | None = None, **overrides) -> TaskSpec:
    d = defaults or TaskDefaults()
    common = dict(cable=d.cable, contact=d.contact)
    if name == "fmb-circle":
        spec = TaskSpec(TaskKind.FMB_INSERTION, PegShape.CIRCLE, peg=d.peg, **common)
    elif name == "fmb-star":
        spec = TaskSpec(TaskKind.FMB_INSERTION, PegShape.STAR, peg=d.peg, **common)
    elif name == "fmb-halfpipe":
        spec = TaskSpec(TaskKind.FMB_INSERTION, PegShape.HALF_PIPE, peg=d.peg, **common)
    elif name == "rgmc-unroute":
        spec = TaskSpec(TaskKind.CABLE_UNROUTE, peg=d.peg, **common)
    elif name == "rgmc-route":
        spec = TaskSpec(TaskKind.CABLE_ROUTE, peg=d.peg, **common)
    elif name == "nist-connector":
        spec = TaskSpec(TaskKind.CONNECTOR_INSERTION, use_perception=False,
                        peg=replace(d.connector, placement_range=0.0), **common)
    elif name == "nist-connector-perception":
        spec = TaskSpec(TaskKind.CONNECTOR_INSERTION, use_perception=True, peg=d.connector, **common)
    else:
        raise KeyError(f"unknown task {name!r}; expected one of {', '.join(TASK_NAMES)}")
    return replace(spec, **overrides) if overrides else spec


_SECTIONS = {"peg": PegGeometry, "connector": PegGeometry, "cable": CableGeometry, "contact": ContactParams}


def load_task_config(path) -> TaskDefaults:
    """Read geometry overrides from an INI file.

    Sections ``[peg]``, ``[connector]``, ``[cable]`` and ``[contact]`` accept
    the field names of the matching dataclass; values are floats in SI units.
    Unknown sections or keys are rejected.
    """
    parser = configparser.ConfigParser()
    with open(Path(path), encoding="utf-8") as fh:
        parser.read_file(fh)
    base = TaskDefaults()
    updates = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ValueError(f"unknown config section [{section}]")
        cls = _SECTIONS[section]
        known = {f.name for f in fields(cls)}
        values = {}
        for key, raw in parser.items(section):
            if key not in known:
                raise ValueError(f"unknown key {key!r} in [{section}]")
            values[key] = float(raw)
        updates[section] = replace(getattr(base, section), **values)
    return replace(base, **updates)
