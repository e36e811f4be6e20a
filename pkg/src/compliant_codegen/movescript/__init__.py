"""MoveScript: the loop-free policy language targeted by code generation."""
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
from .interpreter import InvalidProgram, MoveDefaults, RolloutTrace, StatementRecord, interpret
from .parser import ErrorKind, ParseError, parse, tokenize
from .printer import print_program
from .validate import ViolationKind, Violation, check_source, validate
