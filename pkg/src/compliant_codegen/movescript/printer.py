from __future__ import annotations

from ..conditions import Comparison, CompareOp, ConjunctionOp
from .ast import (
    CompliantMove,
    EstimatePose,
    GraspCable,
    Gripper,
    LetPose,
    NamedPose,
    PickUp,
    PolicyProgram,
    PoseExpr,
    PoseRef,
    PoseRpy,
    PtpMove,
)

_CMP_TEXT = {CompareOp.GE: ">=", CompareOp.LE: "<=", CompareOp.APPROX_EQ: "~=", CompareOp.APPROX_NEQ: "!~="}


def format_number(v: float) -> str:
    v = float(v)
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _vec(vals) -> str:
    return "[" + ", ".join(format_number(v) for v in vals) + "]"


def format_pose_expr(expr: PoseExpr) -> str:
    parts = []
    for a in expr.atoms:
        if isinstance(a, NamedPose):
            parts.append(f"pose({a.index})")
        elif isinstance(a, PoseRpy):
            parts.append(f"pose_rpy({_vec(a.translation)}, {_vec(a.rotation)})")
        elif isinstance(a, PoseRef):
            parts.append(a.name)
        else:
            raise TypeError(f"not a pose atom: {a!r}")
    return " * ".join(parts)


def format_condition(c) -> str:
    if isinstance(c, Comparison):
        return f"{c.variable} {_CMP_TEXT[c.op]} {format_number(c.value)}"
    word = "any" if c.op is ConjunctionOp.ANY_OF else "all"
    return f"{word}(" + ", ".join(format_condition(ch) for ch in c.children) + ")"


def format_statement(s) -> str:
    if isinstance(s, CompliantMove):
        args = [format_pose_expr(s.target)]
        for key in ("stiffness", "impedance", "inertia"):
            v = getattr(s, key)
            if v is not None:
                args.append(f"{key} = {_vec(v)}")
        if s.until is not None:
            args.append(f"until = {format_condition(s.until)}")
        if s.timeout is not None:
            args.append(f"timeout = {format_number(s.timeout)}")
        if s.tare is not None:
            args.append(f"tare = {'true' if s.tare else 'false'}")
        return f"move_compliant({', '.join(args)});"
    if isinstance(s, PtpMove):
        return f"move_ptp({format_pose_expr(s.target)});"
    if isinstance(s, Gripper):
        return f"move_gripper({format_number(s.percent)});"
    if isinstance(s, GraspCable):
        return "grasp_cable();"
    if isinstance(s, PickUp):
        return f"pick_up({s.object});"
    if isinstance(s, EstimatePose):
        return f"let {s.name} = estimate_and_update_pose({s.object});"
    if isinstance(s, LetPose):
        return f"let {s.name} = {format_pose_expr(s.expr)};"
    raise TypeError(f"not a statement: {s!r}")


def print_program(prog: PolicyProgram) -> str:
    """Canonical source text; ``parse(print_program(p)) == p``."""
    if not prog.statements:
        return ""
    return "\n".join(format_statement(s) for s in prog.statements) + "\n"
