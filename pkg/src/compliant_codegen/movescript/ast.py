"""MoveScript syntax tree.

Nodes are frozen dataclasses; source spans are excluded from equality so
that structurally identical programs compare equal regardless of layout.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Span:
    line: int
    column: int


@dataclass(frozen=True)
class NamedPose:
    index: int


@dataclass(frozen=True)
class PoseRpy:
    translation: tuple
    rotation: tuple


@dataclass(frozen=True)
class PoseRef:
    name: str


@dataclass(frozen=True)
class PoseExpr:
    atoms: tuple

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))


@dataclass(frozen=True)
class CompliantMove:
    target: PoseExpr
    stiffness: tuple | None = None
    impedance: tuple | None = None
    inertia: tuple | None = None
    until: object = None
    timeout: float | None = None
    tare: bool | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class PtpMove:
    target: PoseExpr
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Gripper:
    percent: float
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class GraspCable:
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class PickUp:
    object: str
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class EstimatePose:
    name: str
    object: str
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class LetPose:
    name: str
    expr: PoseExpr
    span: Span | None = field(default=None, compare=False, repr=False)


MOVE_STATEMENTS = (CompliantMove, PtpMove)


@dataclass(frozen=True)
class PolicyProgram:
    statements: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "statements", tuple(self.statements))

    def __len__(self):
        return len(self.statements)

    def __iter__(self):
        return iter(self.statements)
