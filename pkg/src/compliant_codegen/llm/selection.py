"""Extracting programs from responses, best-of-n selection and failure taxonomy."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from ..movescript.ast import CompliantMove, LetPose, PoseExpr, PoseRef, PoseRpy, PtpMove
from ..movescript.validate import KNOWN_OBJECTS, ViolationKind, check_source

_FENCE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)


class Misuse(ValueError):
    """classify_failure was called on a candidate that succeeded."""


class ErrorCategory(enum.Enum):
    # ordered by how much an operator must change to make the program work
    INVALID_SYNTAX_OR_UNDEFINED = "InvalidSyntaxOrUndefined"
    DISALLOWED_CONTROL_FLOW = "DisallowedControlFlow"
    MISSING_SEARCH_PATTERN = "MissingSearchPattern"
    WRONG_FORCE_VALUES = "WrongForceValues"

    @property
    def severity(self) -> int:
        return len(ErrorCategory) - list(ErrorCategory).index(self)


def extract_program(response: str) -> str:
    blocks = _FENCE.findall(response)
    if not blocks:
        return response
    return blocks[-1].rstrip("\n")


@dataclass
class Candidate:
    index: int
    response: str
    source: str
    program: object | None
    violations: list

    @property
    def valid(self) -> bool:
        return self.program is not None and not self.violations


def check_candidates(responses, strict_range: bool = True, known_objects=KNOWN_OBJECTS) -> list[Candidate]:
    out = []
    for i, r in enumerate(responses):
        src = extract_program(r)
        prog, viol = check_source(src, strict_range, known_objects)
        out.append(Candidate(i, r, src, prog, viol))
    return out


def select_best(candidates, strict_range: bool = True):
    """First candidate that parses and validates cleanly, or None.

    ``candidates`` may be response strings or ``Candidate`` objects.
    """
    for c in candidates:
        if not isinstance(c, Candidate):
            c = check_candidates([c], strict_range)[0]
        if c.valid:
            return c.program
    return None


def _offsets(expr: PoseExpr, lets: dict, seen=()) -> list:
    out = []
    for a in expr.atoms:
        if isinstance(a, PoseRpy):
            out.append(a)
        elif isinstance(a, PoseRef) and a.name in lets and a.name not in seen:
            out.extend(_offsets(lets[a.name], lets, seen + (a.name,)))
    return out


def has_search_pattern(prog) -> bool:
    """True when some move target carries a lateral or rotational offset."""
    lets = {}
    for s in prog.statements:
        if isinstance(s, LetPose):
            lets[s.name] = s.expr
        elif isinstance(s, (CompliantMove, PtpMove)):
            for off in _offsets(s.target, lets):
                if any(abs(v) > 0 for v in off.translation[:2]) or any(abs(v) > 0 for v in off.rotation):
                    return True
    return False


def classify_failure(candidate: str, trace=None, search_task: bool = True,
                     strict_range: bool = True) -> ErrorCategory:
    """Put a failed candidate into one of the four error categories.

    ``candidate`` is a raw response or program text. ``trace`` is the rollout
    of a statically valid candidate, if it was run.
    """
    prog, viol = check_source(extract_program(candidate), strict_range)
    kinds = {v.kind for v in viol}
    if ViolationKind.DISALLOWED_CONSTRUCT in kinds:
        return ErrorCategory.DISALLOWED_CONTROL_FLOW
    if kinds & {ViolationKind.SYNTAX_ERROR, ViolationKind.UNDEFINED_NAME, ViolationKind.MALFORMED_CONDITION}:
        return ErrorCategory.INVALID_SYNTAX_OR_UNDEFINED
    if kinds:
        # only out-of-range values remain
        return ErrorCategory.WRONG_FORCE_VALUES
    if trace is not None and trace.success:
        raise Misuse("candidate succeeded; there is no failure to classify")
    if search_task and not has_search_pattern(prog):
        return ErrorCategory.MISSING_SEARCH_PATTERN
    # a valid program whose conditions never fired (timeout) or fired at the wrong time
    return ErrorCategory.WRONG_FORCE_VALUES
