"""Policy sources compared in the benchmark and the programs they produce."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from ..conditions import CompareOp, Comparison, all_of, any_of
from ..movescript.ast import (
    CompliantMove,
    EstimatePose,
    NamedPose,
    PickUp,
    PolicyProgram,
    PoseExpr,
    PoseRef,
    PoseRpy,
    PtpMove,
)
from ..movescript.parser import parse
from ..sim.tasks import TaskSpec


@dataclass(frozen=True)
class Scripted:
    pass


@dataclass(frozen=True)
class PtpCodegen:
    # program to rewrite; None means the task's canned reference
    base: object = None


@dataclass(frozen=True)
class FixedCompliance:
    base: object = None
    tolerance: float = 0.001


@dataclass(frozen=True)
class Ours:
    shots: str = "few"     # "zero" or "few"

    def __post_init__(self):
        if self.shots not in ("zero", "few"):
            raise ValueError("shots must be 'zero' or 'few'")


@dataclass(frozen=True)
class CannedPolicy:
    path: str


MethodSpec = Scripted | PtpCodegen | FixedCompliance | Ours | CannedPolicy

REFERENCE_PROGRAMS = {
    "fmb-circle": "fmb_circle.mvs",
    "fmb-star": "fmb_star.mvs",
    "fmb-halfpipe": "fmb_halfpipe.mvs",
    "rgmc-unroute": "rgmc_unroute.mvs",
    "rgmc-route": "rgmc_route.mvs",
    "nist-connector": "nist_connector.mvs",
    "nist-connector-perception": "nist_connector.mvs",
}


def method_name(m) -> str:
    if isinstance(m, Scripted):
        return "scripted"
    if isinstance(m, PtpCodegen):
        return "ptp" if m.base is None else f"ptp({method_name(m.base)})"
    if isinstance(m, FixedCompliance):
        return "fixed-compliance" if m.base is None else f"fixed-compliance({method_name(m.base)})"
    if isinstance(m, Ours):
        return f"ours-{m.shots}"
    if isinstance(m, CannedPolicy):
        return f"canned:{m.path}"
    raise TypeError(f"not a method: {m!r}")


def parse_method(text: str):
    """CLI spelling: scripted | ptp | fixed-compliance | ours-zero | ours-few | canned:<path>."""
    if text == "scripted":
        return Scripted()
    if text == "ptp":
        return PtpCodegen()
    if text == "fixed-compliance":
        return FixedCompliance()
    if text in ("ours-zero", "ours-few"):
        return Ours(text.split("-", 1)[1])
    if text.startswith("canned:") and len(text) > len("canned:"):
        return CannedPolicy(text[len("canned:"):])
    raise ValueError(f"unknown method {text!r}")


def reference_path(task_name: str) -> Path:
    fname = REFERENCE_PROGRAMS[task_name]
    return Path(str(resources.files("compliant_codegen") / "data" / "programs" / fname))


def reference_program(task_name: str) -> PolicyProgram:
    return parse(reference_path(task_name).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- rewrites
def to_ptp(prog: PolicyProgram) -> PolicyProgram:
    """Same waypoints, stiff point-to-point tracking and no termination conditions."""
    out = []
    for s in prog.statements:
        if isinstance(s, CompliantMove):
            out.append(PtpMove(s.target, span=s.span))
        else:
            out.append(s)
    return PolicyProgram(tuple(out))


def to_fixed_compliance(prog: PolicyProgram, tolerance: float = 0.001) -> PolicyProgram:
    """Drop compliance and force settings; every move ends on translation error."""
    until = Comparison(CompareOp.LE, "translation_error", tolerance)
    out = []
    for s in prog.statements:
        if isinstance(s, CompliantMove):
            out.append(CompliantMove(s.target, until=until, timeout=s.timeout, tare=s.tare, span=s.span))
        else:
            out.append(s)
    return PolicyProgram(tuple(out))


# ---------------------------------------------------------- scripted skill
# Tuned once on the circle peg and frozen.
SCRIPTED_CONTACT_FORCE = 0.4
SCRIPTED_DROP_FORCE = 0.1
SCRIPTED_PITCH = 0.001
SCRIPTED_WAYPOINTS = 8
SCRIPTED_WAYPOINT_TIMEOUT = 0.3
SCRIPTED_INSERT_DEPTH = 0.010
SCRIPTED_INSERT_TIMEOUT = 3.0


def spiral_offsets(n: int = SCRIPTED_WAYPOINTS, pitch: float = SCRIPTED_PITCH) -> list:
    """Archimedean spiral, radius growing by ``pitch`` per turn, 4 points per turn."""
    pts = []
    for k in range(1, n + 1):
        a = k * math.pi / 2
        r = pitch * k / 4
        pts.append((round(r * math.cos(a), 6) + 0.0, round(r * math.sin(a), 6) + 0.0))
    return pts


def scripted_program(task: TaskSpec) -> PolicyProgram:
    """Get in contact, spiral in xy while pressing, then insert. No rotation search."""
    if not task.is_peg_task:
        raise ValueError(f"the scripted insertion skill does not apply to {task.name}")
    stmts = []
    if task.kind.name == "CONNECTOR_INSERTION":
        stmts += [PickUp("plug"), EstimatePose("ref", "socket")]
        ref = PoseRef("ref")
        depth = -task.peg.reference_depth
        base = lambda off: PoseExpr([ref, PoseRpy((off[0], off[1], off[2] + depth), (0, 0, 0))])
    else:
        stmts.append(PickUp("peg"))
        base = lambda off: PoseExpr([NamedPose(1), PoseRpy(off, (0, 0, 0))])
    contact = Comparison(CompareOp.GE, "z_force", SCRIPTED_CONTACT_FORCE)
    reached = Comparison(CompareOp.LE, "translation_error", 0.001)
    dropped = Comparison(CompareOp.LE, "z_force", SCRIPTED_DROP_FORCE)
    stmts.append(CompliantMove(base((0.0, 0.0, 0.0)), until=any_of(contact, reached)))
    for dx, dy in spiral_offsets():
        stmts.append(CompliantMove(base((dx, dy, 0.0)), until=dropped,
                                   timeout=SCRIPTED_WAYPOINT_TIMEOUT, tare=False))
    stmts.append(CompliantMove(base((0.0, 0.0, -SCRIPTED_INSERT_DEPTH)), until=all_of(reached),
                               timeout=SCRIPTED_INSERT_TIMEOUT, tare=False))
    return PolicyProgram(tuple(stmts))


def with_base(method, base):
    return replace(method, base=base)
