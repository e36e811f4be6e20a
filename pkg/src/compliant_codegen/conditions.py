"""Termination conditions for compliant moves.

A condition is a tree of threshold comparisons on the controller status,
combined with ALL_OF / ANY_OF.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

STATUS_VARIABLES = ("x_force", "y_force", "z_force", "translation_error", "rotation_error")
FORCE_VARIABLES = ("x_force", "y_force", "z_force")

DEFAULT_APPROX_EPS = 0.05


class InvalidCondition(ValueError):
    pass


class CompareOp(enum.Enum):
    GE = "GREATER_THAN_OR_EQUAL"
    LE = "LESS_THAN_OR_EQUAL"
    APPROX_EQ = "APPROX_EQUAL"
    APPROX_NEQ = "APPROX_NOT_EQUAL"


class ConjunctionOp(enum.Enum):
    ALL_OF = "ALL_OF"
    ANY_OF = "ANY_OF"


@dataclass(frozen=True)
class Comparison:
    op: CompareOp
    variable: str
    value: float

    def __post_init__(self):
        if self.variable not in STATUS_VARIABLES:
            raise InvalidCondition(f"unknown status variable {self.variable!r}")


@dataclass(frozen=True)
class Conjunction:
    op: ConjunctionOp
    children: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


ConditionExpr = Comparison | Conjunction


def all_of(*children) -> Conjunction:
    return Conjunction(ConjunctionOp.ALL_OF, children)


def any_of(*children) -> Conjunction:
    return Conjunction(ConjunctionOp.ANY_OF, children)


def _lookup(status, name: str) -> float:
    if isinstance(status, dict):
        return status[name]
    return getattr(status, name)


def evaluate_condition(expr, status, approx_eps: float = DEFAULT_APPROX_EPS) -> bool:
    """Evaluate ``expr`` against a status (object with the five fields, or a dict).

    Every child of a conjunction is evaluated; there is no short-circuit.
    """
    if isinstance(expr, Comparison):
        try:
            v = _lookup(status, expr.variable)
        except (KeyError, AttributeError):
            raise InvalidCondition(f"status has no variable {expr.variable!r}") from None
        if expr.op is CompareOp.GE:
            return v >= expr.value
        if expr.op is CompareOp.LE:
            return v <= expr.value
        near = abs(v - expr.value) <= approx_eps
        return near if expr.op is CompareOp.APPROX_EQ else not near
    if isinstance(expr, Conjunction):
        if not expr.children:
            raise InvalidCondition("conjunction with no children")
        results = [evaluate_condition(c, status, approx_eps) for c in expr.children]
        return all(results) if expr.op is ConjunctionOp.ALL_OF else any(results)
    raise InvalidCondition(f"not a condition: {expr!r}")


def condition_variables(expr) -> set[str]:
    if isinstance(expr, Comparison):
        return {expr.variable}
    out: set[str] = set()
    for c in expr.children:
        out |= condition_variables(c)
    return out


def iter_comparisons(expr):
    if isinstance(expr, Comparison):
        yield expr
    else:
        for c in expr.children:
            yield from iter_comparisons(c)
