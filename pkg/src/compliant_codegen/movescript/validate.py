"""Static checks mirroring the prompt rules (no undefined names, sane values)."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ..conditions import FORCE_VARIABLES, Comparison, Conjunction
from .ast import CompliantMove, EstimatePose, Gripper, LetPose, PickUp, PoseExpr, PoseRef, PtpMove, Span
from .parser import ErrorKind, ParseError, parse

STRICT_FORCE_LIMIT = 0.4
DEFAULT_FORCE_LIMIT = 50.0

KNOWN_OBJECTS = frozenset({"peg", "hole", "plug", "socket", "tunnel", "cable"})


class ViolationKind(enum.Enum):
    DISALLOWED_CONSTRUCT = "DisallowedConstruct"
    UNDEFINED_NAME = "UndefinedName"
    OUT_OF_RANGE_VALUE = "OutOfRangeValue"
    MALFORMED_CONDITION = "MalformedCondition"
    SYNTAX_ERROR = "SyntaxError"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    span: Span | None
    message: str


def _refs(expr: PoseExpr):
    return [a.name for a in expr.atoms if isinstance(a, PoseRef)]


def _check_condition(cond, span, force_limit, out):
    if isinstance(cond, Conjunction):
        if not cond.children:
            out.append(Violation(ViolationKind.MALFORMED_CONDITION, span, "empty any()/all()"))
        for c in cond.children:
            _check_condition(c, span, force_limit, out)
    elif isinstance(cond, Comparison):
        v = cond.value
        if not math.isfinite(v):
            out.append(Violation(ViolationKind.OUT_OF_RANGE_VALUE, span, f"non-finite threshold on {cond.variable}"))
        elif cond.variable in FORCE_VARIABLES and abs(v) > force_limit:
            out.append(Violation(
                ViolationKind.OUT_OF_RANGE_VALUE, span,
                f"{cond.variable} threshold {v:g} outside [-{force_limit:g}, {force_limit:g}]",
            ))
        elif cond.variable not in FORCE_VARIABLES and v < 0:
            out.append(Violation(ViolationKind.OUT_OF_RANGE_VALUE, span, f"negative {cond.variable} threshold"))
    else:
        out.append(Violation(ViolationKind.MALFORMED_CONDITION, span, f"not a condition: {cond!r}"))


def validate(prog, strict_range: bool = False, known_objects=KNOWN_OBJECTS) -> list[Violation]:
    """Return every rule violation in ``prog`` (empty list when valid)."""
    out: list[Violation] = []
    bound: set[str] = set()
    force_limit = STRICT_FORCE_LIMIT if strict_range else DEFAULT_FORCE_LIMIT

    def check_refs(expr, span):
        for name in _refs(expr):
            if name not in bound:
                out.append(Violation(ViolationKind.UNDEFINED_NAME, span, f"undefined pose '{name}'"))

    for s in prog.statements:
        span = s.span
        if isinstance(s, CompliantMove):
            check_refs(s.target, span)
            for key in ("stiffness", "inertia"):
                v = getattr(s, key)
                if v is not None and any(not (c > 0 and math.isfinite(c)) for c in v):
                    out.append(Violation(ViolationKind.OUT_OF_RANGE_VALUE, span, f"{key} components must be > 0"))
            if s.impedance is not None and any(not (0 < c <= 1) for c in s.impedance):
                out.append(Violation(ViolationKind.OUT_OF_RANGE_VALUE, span, "impedance components must lie in (0, 1]"))
            if s.timeout is not None and not (s.timeout > 0 and math.isfinite(s.timeout)):
                out.append(Violation(ViolationKind.OUT_OF_RANGE_VALUE, span, "timeout must be > 0"))
            if s.until is not None:
                _check_condition(s.until, span, force_limit, out)
        elif isinstance(s, PtpMove):
            check_refs(s.target, span)
        elif isinstance(s, Gripper):
            if not (0 <= s.percent <= 100):
                out.append(Violation(ViolationKind.OUT_OF_RANGE_VALUE, span, "gripper percent must lie in [0, 100]"))
        elif isinstance(s, PickUp):
            if known_objects is not None and s.object not in known_objects:
                out.append(Violation(ViolationKind.UNDEFINED_NAME, span, f"unknown object '{s.object}'"))
        elif isinstance(s, EstimatePose):
            if known_objects is not None and s.object not in known_objects:
                out.append(Violation(ViolationKind.UNDEFINED_NAME, span, f"unknown object '{s.object}'"))
            bound.add(s.name)
        elif isinstance(s, LetPose):
            check_refs(s.expr, span)
            bound.add(s.name)
    return out


_PARSE_KIND = {
    ErrorKind.DISALLOWED: ViolationKind.DISALLOWED_CONSTRUCT,
    ErrorKind.UNDEFINED: ViolationKind.UNDEFINED_NAME,
    ErrorKind.SYNTAX: ViolationKind.SYNTAX_ERROR,
}


def check_source(text: str, strict_range: bool = False, known_objects=KNOWN_OBJECTS):
    """Parse and validate; returns ``(program or None, violations)``."""
    try:
        prog = parse(text)
    except ParseError as e:
        return None, [Violation(_PARSE_KIND[e.kind], Span(e.line, e.column), e.message)]
    return prog, validate(prog, strict_range, known_objects)
