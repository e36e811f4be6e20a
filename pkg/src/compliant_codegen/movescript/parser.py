"""Tokenizer and recursive-descent parser for MoveScript.

Grammar (statements are terminated by ``;``)::

    program   := { statement ";" }
    statement := move | gripper | grasp | pickup | let
    move      := ("move_compliant" | "move_ptp") "(" pose_expr { "," kwarg } ")"
    kwarg     := ("stiffness" | "impedance" | "inertia") "=" vec6
               | "until" "=" cond | "timeout" "=" number | "tare" "=" bool
    gripper   := "move_gripper" "(" number ")"
    grasp     := "grasp_cable" "(" ")"
    pickup    := "pick_up" "(" ident ")"
    let       := "let" ident "=" ( "estimate_and_update_pose" "(" ident ")" | pose_expr )
    pose_expr := pose_atom { "*" pose_atom }
    pose_atom := "pose" "(" int ")" | "pose_rpy" "(" vec3 "," vec3 ")" | ident
    cond      := term | ("any" | "all") "(" cond { "," cond } ")"
    term      := var (">=" | "<=" | "~=" | "!~=") number

``#`` starts a comment. The words ``while``, ``for``, ``if`` and ``def``
are rejected wherever they appear.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from ..conditions import STATUS_VARIABLES, Comparison, CompareOp, Conjunction, ConjunctionOp
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
    Span,
)

RESERVED = ("while", "for", "if", "def")

COMPARATORS = {
    ">=": CompareOp.GE,
    "<=": CompareOp.LE,
    "~=": CompareOp.APPROX_EQ,
    "!~=": CompareOp.APPROX_NEQ,
}

STATEMENT_WORDS = ("move_compliant", "move_ptp", "move_gripper", "grasp_cable", "pick_up", "let")
BUILTINS = STATEMENT_WORDS + (
    "pose", "pose_rpy", "estimate_and_update_pose", "any", "all", "true", "false", "True", "False",
) + STATUS_VARIABLES
KWARGS = ("stiffness", "impedance", "inertia", "until", "timeout", "tare")


class ErrorKind(enum.Enum):
    SYNTAX = "Syntax"
    DISALLOWED = "DisallowedConstruct"
    UNDEFINED = "UndefinedName"


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int, kind: ErrorKind = ErrorKind.SYNTAX):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind


@dataclass(frozen=True)
class Token:
    kind: str      # "ident", "number", "op", "eof"
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>!~=|>=|<=|~=|[()\[\],;=*+\-<>])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident" and value in RESERVED:
            raise ParseError(
                f"'{value}' is not allowed: programs are straight-line sequences of moves",
                line, col, ErrorKind.DISALLOWED,
            )
        elif kind in ("number", "ident", "op"):
            tokens.append(Token(kind, value, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None, kind=ErrorKind.SYNTAX):
        t = tok or self.tok
        return ParseError(message, t.line, t.column, kind)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "ident") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected '{text}', found '{found}'")
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}, found '{self.tok.text or 'end of input'}'")
        return self.advance()

    # -- literals
    def number(self) -> float:
        sign = 1.0
        if self.at("-") or self.at("+"):
            sign = -1.0 if self.advance().text == "-" else 1.0
        if self.tok.kind != "number":
            raise self.error(f"expected a number, found '{self.tok.text or 'end of input'}'")
        return sign * float(self.advance().text)

    def integer(self) -> int:
        t = self.tok
        if t.kind != "number" or not t.text.isdigit():
            raise self.error("expected a non-negative integer")
        self.advance()
        return int(t.text)

    def vector(self, size: int) -> tuple:
        start = self.expect("[")
        vals = []
        if not self.at("]"):
            vals.append(self.number())
            while self.at(","):
                self.advance()
                vals.append(self.number())
        self.expect("]")
        if len(vals) != size:
            raise self.error(f"expected {size} components, got {len(vals)}", start)
        return tuple(vals)

    def boolean(self) -> bool:
        t = self.ident("true or false")
        if t.text in ("true", "True"):
            return True
        if t.text in ("false", "False"):
            return False
        raise self.error("expected true or false", t)

    # -- pose expressions
    def pose_atom(self):
        t = self.ident("a pose")
        if t.text == "pose":
            self.expect("(")
            idx = self.integer()
            self.expect(")")
            return NamedPose(idx)
        if t.text == "pose_rpy":
            self.expect("(")
            trans = self.vector(3)
            self.expect(",")
            rot = self.vector(3)
            self.expect(")")
            return PoseRpy(trans, rot)
        if self.at("("):
            raise self.error(f"call to undefined method '{t.text}'", t, ErrorKind.UNDEFINED)
        if t.text in BUILTINS:
            raise self.error(f"'{t.text}' is not a pose", t)
        return PoseRef(t.text)

    def pose_expr(self) -> PoseExpr:
        atoms = [self.pose_atom()]
        while self.at("*"):
            self.advance()
            atoms.append(self.pose_atom())
        return PoseExpr(atoms)

    # -- conditions
    def condition(self):
        t = self.tok
        if t.kind == "ident" and t.text in ("any", "all") and self.peek().text == "(":
            self.advance()
            self.expect("(")
            children = []
            if not self.at(")"):
                children.append(self.condition())
                while self.at(","):
                    self.advance()
                    children.append(self.condition())
            self.expect(")")
            op = ConjunctionOp.ANY_OF if t.text == "any" else ConjunctionOp.ALL_OF
            return Conjunction(op, tuple(children))
        var = self.ident("a status variable")
        if var.text not in STATUS_VARIABLES:
            raise self.error(
                f"unknown status variable '{var.text}' (expected one of {', '.join(STATUS_VARIABLES)})",
                var, ErrorKind.UNDEFINED,
            )
        op = self.tok
        if op.kind != "op" or op.text not in COMPARATORS:
            raise self.error(f"expected one of >=, <=, ~=, !~=, found '{op.text or 'end of input'}'")
        self.advance()
        return Comparison(COMPARATORS[op.text], var.text, self.number())

    # -- statements
    def move(self, name: Token):
        self.expect("(")
        target = self.pose_expr()
        kwargs = {}
        while self.at(","):
            self.advance()
            key = self.ident("a keyword argument")
            if key.text not in KWARGS:
                raise self.error(f"unknown keyword argument '{key.text}'", key)
            if key.text in kwargs:
                raise self.error(f"duplicate keyword argument '{key.text}'", key)
            if name.text == "move_ptp":
                raise self.error("move_ptp takes no keyword arguments", key)
            self.expect("=")
            if key.text in ("stiffness", "impedance", "inertia"):
                kwargs[key.text] = self.vector(6)
            elif key.text == "until":
                kwargs["until"] = self.condition()
            elif key.text == "timeout":
                kwargs["timeout"] = self.number()
            else:
                kwargs["tare"] = self.boolean()
        self.expect(")")
        span = Span(name.line, name.column)
        if name.text == "move_ptp":
            return PtpMove(target, span=span)
        return CompliantMove(target, span=span, **kwargs)

    def statement(self):
        t = self.ident("a statement")
        span = Span(t.line, t.column)
        word = t.text
        if word in ("move_compliant", "move_ptp"):
            return self.move(t)
        if word == "move_gripper":
            self.expect("(")
            pct = self.number()
            self.expect(")")
            return Gripper(pct, span=span)
        if word == "grasp_cable":
            self.expect("(")
            self.expect(")")
            return GraspCable(span=span)
        if word == "pick_up":
            self.expect("(")
            obj = self.ident("an object name").text
            self.expect(")")
            return PickUp(obj, span=span)
        if word == "let":
            name = self.ident("a name")
            if name.text in BUILTINS or name.text in KWARGS:
                raise self.error(f"cannot bind reserved name '{name.text}'", name)
            self.expect("=")
            if self.at("estimate_and_update_pose"):
                self.advance()
                self.expect("(")
                obj = self.ident("an object name").text
                self.expect(")")
                return EstimatePose(name.text, obj, span=span)
            return LetPose(name.text, self.pose_expr(), span=span)
        if self.at("("):
            raise self.error(f"call to undefined method '{word}'", t, ErrorKind.UNDEFINED)
        raise self.error(f"unexpected '{word}' at start of statement", t)

    def program(self) -> PolicyProgram:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
            self.expect(";")
        return PolicyProgram(tuple(stmts))


def parse(text: str) -> PolicyProgram:
    """Parse MoveScript source; raises ``ParseError`` with line/column."""
    return _Parser(tokenize(text)).program()
