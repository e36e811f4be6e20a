"""Prompt assembly: task description, API doc, hints and examples, in that order."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..conditions import STATUS_VARIABLES
from ..control import DEFAULT_IMPEDANCE, DEFAULT_INERTIA, DEFAULT_STIFFNESS, DEFAULT_TIMEOUT_S
from ..movescript.parser import COMPARATORS
from ..movescript.validate import STRICT_FORCE_LIMIT


class Hint(enum.Enum):
    PATTERN_SEARCH = "PatternSearch"
    EXTRA_RULES = "ExtraRules"
    PSEUDOCODE_FIRST = "PseudocodeFirst"


ALL_HINTS = frozenset(Hint)

# Emitted in enum order so the text does not depend on set iteration.
HINT_TEXT = {
    Hint.PATTERN_SEARCH: (
        "The poses you are given are only approximate. Use a pattern search: "
        "probe around the nominal pose with small moves and stop each move on a force "
        "or position condition."
    ),
    Hint.EXTRA_RULES: (
        "Rules:\n"
        "- Only use the statements listed above; do not invent functions.\n"
        "- Do not read sensor values into variables.\n"
        "- Write a straight sequence of statements with no loops or conditionals "
        "(while, for, if and def are rejected)."
    ),
    Hint.PSEUDOCODE_FIRST: (
        "First write your strategy as a short numbered list in plain language, "
        "then translate each step into one statement of the program."
    ),
}

TASK_DESCRIPTIONS = {
    "fmb-circle": (
        "You control a robot arm holding a peg with a circular cross-section above a board. "
        "Insert the peg into the matching hole. pose(1) is a reference pose just below the "
        "top of the hole."
    ),
    "fmb-star": (
        "You control a robot arm holding a peg with a four-pointed star cross-section. "
        "The peg is held at an unknown rotation about the vertical axis. Insert it into the "
        "star-shaped hole. pose(1) is a reference pose just below the top of the hole."
    ),
    "fmb-halfpipe": (
        "You control a robot arm holding a half-pipe shaped peg. The peg may be held at an "
        "unknown rotation about the vertical axis. Insert it into the matching hole. "
        "pose(1) is a reference pose just below the top of the hole."
    ),
    "rgmc-unroute": (
        "You control a robot arm next to a cable threaded through a tunnel. The tunnel has a "
        "small opening at the top. Grasp the cable and remove it from the tunnel. pose(1) is "
        "the pose of the cable inside the tunnel."
    ),
    "rgmc-route": (
        "You control a robot arm next to a cable lying on top of a tunnel. The tunnel has a "
        "small opening at the top. Grasp the cable and thread it down into the tunnel. pose(1) "
        "is the pose of the cable above the tunnel."
    ),
    "nist-connector": (
        "You control a robot arm. Pick up the waterproof plug and insert it into the socket. "
        "estimate_and_update_pose(socket) returns the socket pose at its top surface."
    ),
    "nist-connector-perception": (
        "You control a robot arm. Pick up the waterproof plug and insert it into the socket. "
        "estimate_and_update_pose(socket) returns a camera estimate of the socket pose at its "
        "top surface; it can be off by a few millimeters."
    ),
}


def _vec(v) -> str:
    return "[" + ", ".join(f"{x:g}" for x in v) + "]"


def api_doc() -> str:
    """Reference for the policy language; identical for every task."""
    ops = ", ".join(COMPARATORS)
    lim = f"{STRICT_FORCE_LIMIT:g}"
    lines = [
        "Write the program in MoveScript. Every statement ends with ';'. Available statements:",
        "- move_compliant(pose, stiffness = [6], impedance = [6], inertia = [6], until = cond, "
        "timeout = seconds, tare = true|false);",
        "  Moves the flange toward pose under admittance control and stops when cond holds or "
        "the timeout expires. Keyword arguments are optional.",
        f"  stiffness: maximum Cartesian stiffness per axis, default {_vec(DEFAULT_STIFFNESS)}.",
        f"  impedance: values in (0, 1] that scale the stiffness, default {_vec(DEFAULT_IMPEDANCE)}.",
        f"  inertia: virtual Cartesian inertia [kg, kg m^2], default {_vec(DEFAULT_INERTIA)}.",
        f"  timeout: seconds, default {DEFAULT_TIMEOUT_S:g}.",
        "  tare: zero the force sensor before moving; use false when already in contact. Default true.",
        "- move_ptp(pose); stiff point-to-point move. It faults if contact forces grow large.",
        "- move_gripper(percent_open); 0 is closed, 100 is fully open.",
        "- grasp_cable(); grab the free end of the cable.",
        "- pick_up(object); grasp an object, for example peg or plug.",
        "- let name = estimate_and_update_pose(object); bind the estimated pose of an object.",
        "- let name = pose_expression; bind a pose for later use.",
        "Poses:",
        "- pose(n) is a named reference pose of the scene.",
        "- pose_rpy([x, y, z], [roll, pitch, yaw]) is an offset in meters and radians.",
        "- a * b applies b on top of a, for example pose(1) * pose_rpy([0, 0, -0.01], [0, 0, 0]).",
        "Conditions:",
        f"- variable op value, where variable is one of {', '.join(STATUS_VARIABLES)} and op is one of {ops}.",
        f"- force thresholds are in newtons within [-{lim}, {lim}]; errors are meters and radians.",
        "- any(c1, c2, ...) holds when one condition holds; all(c1, c2, ...) when every one holds.",
        "Force signs: z_force is positive when pushing down on a surface and negative when "
        "pulled down by a snag; x_force is positive when blocked moving in -x.",
        "Put the program in a single fenced code block.",
    ]
    return "\n".join(lines)


# one example subcommand per entry: (comment, statement)
RGMC_EXAMPLES = (
    ("# move down until contact",
     "move_compliant(pose(1) * pose_rpy([0, 0, -0.01], [0, 0, 0]), "
     "until = any(z_force >= 0.4, translation_error <= 0.001));"),
    ("# move up until a snag",
     "move_compliant(pose(1) * pose_rpy([0, 0, 0.01], [0, 0, 0]), "
     "until = any(z_force <= -0.4, translation_error <= 0.001));"),
    ("# move right until a snag",
     "move_compliant(pose(1) * pose_rpy([-0.01, 0, 0], [0, 0, 0]), "
     "until = any(x_force >= 0.4, translation_error <= 0.001));"),
)

PEG_EXAMPLES = (
    ("# move down until contact",
     "move_compliant(pose(1), until = any(z_force >= 0.4, translation_error <= 0.001));"),
    ("# rotate while in contact until the peg drops",
     "move_compliant(pose(1) * pose_rpy([0, 0, 0], [0, 0, 0.5]), "
     "until = any(z_force <= 0.1, rotation_error <= 0.01), tare = false);"),
)

CONNECTOR_EXAMPLES = (
    ("# move down until contact",
     "move_compliant(socket_pose * pose_rpy([0, 0, -0.005], [0, 0, 0]), "
     "until = any(z_force >= 0.4, translation_error <= 0.001));"),
    ("# slide sideways while in contact until the plug drops",
     "move_compliant(socket_pose * pose_rpy([0.001, 0, -0.005], [0, 0, 0]), "
     "until = z_force <= 0.1, timeout = 0.3, tare = false);"),
)


def examples_for(task_name: str) -> tuple:
    if task_name.startswith("rgmc"):
        return RGMC_EXAMPLES
    if task_name.startswith("nist"):
        return CONNECTOR_EXAMPLES
    return PEG_EXAMPLES


@dataclass(frozen=True)
class PromptBundle:
    task_description: str
    api_doc: str
    hints: frozenset = field(default_factory=frozenset)
    examples: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "hints", frozenset(Hint(h) for h in self.hints))
        object.__setattr__(self, "examples", tuple(self.examples))

    def with_example(self, example) -> "PromptBundle":
        return PromptBundle(self.task_description, self.api_doc, self.hints, self.examples + (example,))


def bundle_for(task_name: str, shots: str = "few", hints=ALL_HINTS) -> PromptBundle:
    if task_name not in TASK_DESCRIPTIONS:
        raise KeyError(f"no task description for {task_name!r}")
    if shots not in ("zero", "few"):
        raise ValueError("shots must be 'zero' or 'few'")
    ex = examples_for(task_name) if shots == "few" else ()
    return PromptBundle(TASK_DESCRIPTIONS[task_name], api_doc(), frozenset(hints), ex)


def _format_example(ex) -> str:
    if isinstance(ex, str):
        return ex
    return "\n".join(ex)


def assemble_prompt(bundle: PromptBundle) -> str:
    """Concatenate the parts; a bundle without examples gets no Examples section."""
    parts = [bundle.task_description.strip(), bundle.api_doc.strip()]
    hint_text = [HINT_TEXT[h] for h in Hint if h in bundle.hints]
    if hint_text:
        parts.append("Hints:\n" + "\n".join(hint_text))
    text = "\n\n".join(parts) + "\n"
    if bundle.examples:
        # examples go last and each one appends, so adding one keeps the prefix
        text += "\nExamples:\n"
        for ex in bundle.examples:
            text += _format_example(ex) + "\n"
    return text
