from __future__ import annotations

from dataclasses import dataclass, field

from ..control import (
    DEFAULT_CONFIG,
    DEFAULT_IMPEDANCE,
    DEFAULT_INERTIA,
    DEFAULT_STIFFNESS,
    DEFAULT_TIMEOUT_S,
    ControlConfig,
    MoveCommand,
    MoveOutcome,
    MoveStatus,
    StiffnessSpec,
    execute_compliant_move,
    execute_ptp_move,
)
from ..pose_math import Pose
from ..sim.world import SimError, check_success
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
from .validate import validate


class InvalidProgram(ValueError):
    def __init__(self, violations):
        super().__init__("; ".join(v.message for v in violations))
        self.violations = violations


@dataclass(frozen=True)
class MoveDefaults:
    """Values used for keyword arguments a compliant move leaves out."""

    stiffness: tuple = DEFAULT_STIFFNESS
    impedance: tuple = DEFAULT_IMPEDANCE
    inertia: tuple = DEFAULT_INERTIA
    timeout: float = DEFAULT_TIMEOUT_S
    tare: bool = True


@dataclass
class StatementRecord:
    index: int
    statement: object
    outcome: MoveOutcome | None = None
    error: str | None = None


@dataclass
class RolloutTrace:
    records: list = field(default_factory=list)
    success: bool = False
    aborted: bool = False
    fault_index: int | None = None
    error: str | None = None
    elapsed_s: float = 0.0

    @property
    def outcomes(self) -> list:
        return [r.outcome for r in self.records if r.outcome is not None]

    @property
    def faulted(self) -> bool:
        return self.fault_index is not None

    @property
    def timed_out(self) -> bool:
        return any(o.status is MoveStatus.TIMED_OUT for o in self.outcomes)

    def same_as(self, other: "RolloutTrace") -> bool:
        if (self.success, self.aborted, self.fault_index, self.error) != (
            other.success, other.aborted, other.fault_index, other.error
        ) or len(self.records) != len(other.records):
            return False
        for a, b in zip(self.records, other.records):
            if (a.outcome is None) != (b.outcome is None) or a.error != b.error:
                return False
            if a.outcome is not None and not a.outcome.same_as(b.outcome):
                return False
        return True


def eval_pose(expr: PoseExpr, world, env: dict) -> Pose:
    result = None
    for atom in expr.atoms:
        if isinstance(atom, NamedPose):
            p = world.named_pose(atom.index)
        elif isinstance(atom, PoseRpy):
            p = Pose(atom.translation, atom.rotation)
        elif isinstance(atom, PoseRef):
            p = env[atom.name]
        else:
            raise TypeError(f"bad pose atom {atom!r}")
        result = p if result is None else result * p
    return result


def build_command(stmt: CompliantMove, target: Pose, defaults: MoveDefaults) -> MoveCommand:
    spec = StiffnessSpec(
        stmt.stiffness if stmt.stiffness is not None else defaults.stiffness,
        stmt.impedance if stmt.impedance is not None else defaults.impedance,
        stmt.inertia if stmt.inertia is not None else defaults.inertia,
    )
    return MoveCommand(
        target=target,
        stiffness=spec,
        termination=stmt.until,
        timeout_s=stmt.timeout if stmt.timeout is not None else defaults.timeout,
        tare_ft_sensor=stmt.tare if stmt.tare is not None else defaults.tare,
    )


def interpret(
    prog: PolicyProgram,
    world,
    defaults: MoveDefaults = MoveDefaults(),
    config: ControlConfig = DEFAULT_CONFIG,
    strict_range: bool = False,
) -> RolloutTrace:
    """Run the statements in order; a faulted move or world error aborts the rest."""
    violations = validate(prog, strict_range, known_objects=None)
    if violations:
        raise InvalidProgram(violations)
    env: dict[str, Pose] = {}
    trace = RolloutTrace()
    start_clock = world.clock
    for i, stmt in enumerate(prog.statements):
        rec = StatementRecord(i, stmt)
        trace.records.append(rec)
        try:
            if isinstance(stmt, CompliantMove):
                cmd = build_command(stmt, eval_pose(stmt.target, world, env), defaults)
                rec.outcome = execute_compliant_move(world, cmd, config)
            elif isinstance(stmt, PtpMove):
                rec.outcome = execute_ptp_move(world, eval_pose(stmt.target, world, env), config)
            elif isinstance(stmt, Gripper):
                world.move_gripper(stmt.percent)
            elif isinstance(stmt, GraspCable):
                world.grasp_cable()
            elif isinstance(stmt, PickUp):
                world.pick_up(stmt.object)
            elif isinstance(stmt, EstimatePose):
                env[stmt.name] = world.estimate_and_update_pose(stmt.object)
            elif isinstance(stmt, LetPose):
                env[stmt.name] = eval_pose(stmt.expr, world, env)
        except SimError as e:
            rec.error = f"{type(e).__name__}: {e}"
            trace.error = rec.error
            trace.aborted = True
            break
        if rec.outcome is not None and rec.outcome.status is MoveStatus.FAULTED:
            trace.fault_index = i
            trace.aborted = True
            break
    trace.elapsed_s = world.clock - start_clock
    trace.success = check_success(world)
    return trace
