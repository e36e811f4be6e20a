"""Seeded rollouts of a method on a task, aggregated into reports."""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from ..control import DEFAULT_CONFIG, ControlConfig
from ..llm.client import GenerationConfig, generate_candidates
from ..llm.prompts import ALL_HINTS, Hint, assemble_prompt, bundle_for
from ..llm.selection import ErrorCategory, check_candidates, classify_failure
from ..movescript.interpreter import interpret
from ..movescript.parser import parse
from ..movescript.printer import print_program
from ..sim.tasks import Side, TaskKind, TaskSpec, task_spec
from ..sim.world import spawn_task
from .methods import (
    CannedPolicy,
    FixedCompliance,
    Ours,
    PtpCodegen,
    Scripted,
    method_name,
    reference_program,
    scripted_program,
    to_fixed_compliance,
    to_ptp,
)


@dataclass
class RolloutRecord:
    seed: int
    success: bool
    faulted: bool
    aborted: bool
    fault_index: int | None
    error: str | None
    sim_time_s: float
    statuses: str          # one letter per executed move: T(erminated), O (timed out), F(aulted)


@dataclass
class Report:
    task: str
    method: str
    n_evals: int = 0
    successes: int = 0
    failures: int = 0
    faults: int = 0
    seed: int = 0
    wall_clock_s: float | None = None
    reason: str | None = None
    program: str | None = None
    rollouts: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def success_rate(self) -> float:
        return self.successes / self.n_evals if self.n_evals else 0.0

    def check(self) -> None:
        if self.successes + self.failures + self.faults != self.n_evals:
            raise ValueError("successes + failures + faults must equal n_evals")


_STATUS_LETTER = {"TERMINATED": "T", "TIMED_OUT": "O", "FAULTED": "F"}


def summarize(seed: int, trace) -> RolloutRecord:
    letters = "".join(_STATUS_LETTER[o.status.name] for o in trace.outcomes)
    return RolloutRecord(seed, bool(trace.success), trace.faulted, trace.aborted, trace.fault_index,
                         trace.error, round(trace.elapsed_s, 6), letters)


def as_spec(task) -> TaskSpec:
    return task_spec(task) if isinstance(task, str) else task


def rollout_seeds(seed: int, n: int) -> list[int]:
    return [seed + i for i in range(n)]


def _draw_class(spec: TaskSpec, s: int):
    w = spawn_task(spec, s)
    if spec.is_cable_task:
        return w.env["side"]
    return round(w.env["peg_rotation"], 6)


def balanced_seeds(task, n: int, start: int = 0) -> list[int]:
    """Seeds whose discrete randomization (half-pipe rotation, cable side) is split evenly.

    Tasks with a continuous draw fall back to consecutive seeds.
    """
    spec = as_spec(task)
    discrete = spec.is_cable_task and spec.side is None or (
        spec.kind is TaskKind.FMB_INSERTION and spec.symmetry.period > 3.5
    )
    if not discrete:
        return rollout_seeds(start, n)
    want = {}
    out = []
    s = start
    while len(out) < n:
        c = _draw_class(spec, s)
        want.setdefault(c, 0)
        # take a seed while its class is not ahead of the other one
        if want[c] < (n + 1) // 2:
            want[c] += 1
            out.append(s)
        s += 1
        if s - start > 100 * n + 100:
            raise RuntimeError("could not find balanced seeds")
    return out


def obtain_program(spec: TaskSpec, method, gen: GenerationConfig | None = None):
    """Return ``(program or None, reason, metadata)`` for a method on a task."""
    meta = {}
    if isinstance(method, Scripted):
        return scripted_program(spec), None, meta
    if isinstance(method, CannedPolicy):
        if method.path == "reference":
            return reference_program(spec.name), None, meta
        return parse(Path(method.path).read_text(encoding="utf-8")), None, meta
    if isinstance(method, (PtpCodegen, FixedCompliance)):
        if method.base is None:
            base, reason = reference_program(spec.name), None
            meta["base"] = "reference"
        else:
            base, reason, sub = obtain_program(spec, method.base, gen)
            meta["base"] = method_name(method.base)
            meta.update({f"base_{k}": v for k, v in sub.items()})
        if base is None:
            return None, reason, meta
        # the base program was written for compliant moves; its action space is swapped afterwards
        meta["rewrite"] = "ptp" if isinstance(method, PtpCodegen) else "fixed-compliance"
        if isinstance(method, PtpCodegen):
            return to_ptp(base), None, meta
        return to_fixed_compliance(base, method.tolerance), None, meta
    if isinstance(method, Ours):
        gen = gen or GenerationConfig()
        prompt = assemble_prompt(bundle_for(spec.name, method.shots))
        responses = generate_candidates(prompt, gen)
        cands = check_candidates(responses)
        meta["samples"] = len(responses)
        meta["valid_samples"] = sum(c.valid for c in cands)
        for c in cands:
            if c.valid:
                meta["selected"] = c.index
                return c.program, None, meta
        return None, f"none of {len(cands)} candidates passed validation", meta
    raise TypeError(f"not a method: {method!r}")


def run_evaluation(task, method, n_evals: int = 10, seed: int = 0, *, seeds=None,
                   gen: GenerationConfig | None = None, config: ControlConfig = DEFAULT_CONFIG,
                   timing: bool = True) -> Report:
    spec = as_spec(task)
    t0 = time.perf_counter()
    seeds = list(seeds) if seeds is not None else rollout_seeds(seed, n_evals)
    n_evals = len(seeds)
    rep = Report(spec.name, method_name(method), n_evals=n_evals, seed=seed)
    prog, reason, meta = obtain_program(spec, method, gen)
    rep.metadata.update(meta)
    if spec.side is not None:
        rep.metadata["side"] = spec.side.value
    if prog is None:
        rep.reason = reason
        rep.failures = n_evals
    else:
        rep.program = print_program(prog)
        for s in seeds:
            trace = interpret(prog, spawn_task(spec, s), config=config)
            rec = summarize(s, trace)
            rep.rollouts.append(rec)
            if rec.success:
                rep.successes += 1
            elif rec.faulted:
                rep.faults += 1
            else:
                rep.failures += 1
    if timing:
        rep.wall_clock_s = round(time.perf_counter() - t0, 3)
    rep.check()
    return rep


def run_robustness(method, n_evals: int = 10, seed: int = 0, task: str = "rgmc-unroute",
                   gen: GenerationConfig | None = None, timing: bool = True) -> tuple[Report, Report]:
    """One report per start side; the seeds and the program are the same for both."""
    spec = as_spec(task)
    if spec.kind is not TaskKind.CABLE_UNROUTE:
        raise ValueError("robustness runs on the unroute task")
    out = []
    for side in (Side.LEFT, Side.RIGHT):
        out.append(run_evaluation(TaskSpec(spec.kind, spec.shape, spec.use_perception, spec.peg, spec.cable,
                                           spec.contact, side),
                                  method, n_evals, seed, gen=gen, timing=timing))
    return out[0], out[1]


HINT_SUBSETS = (
    frozenset(),
    frozenset({Hint.PATTERN_SEARCH}),
    frozenset({Hint.PATTERN_SEARCH, Hint.EXTRA_RULES}),
    ALL_HINTS,
)


def hint_label(hints) -> str:
    names = [h.value for h in Hint if h in hints]
    return "+".join(names) if names else "none"


def run_hint_ablation(task="rgmc-unroute", hint_subsets=HINT_SUBSETS, failures_per_cell: int = 15,
                      gen: GenerationConfig | None = None, max_samples: int = 100,
                      seed: int = 0) -> dict:
    """Rejection-sample failing zero-shot candidates per hint subset and classify them.

    Returns ``{label: Counter(ErrorCategory -> count)}``. Successful candidates are
    skipped; sampling stops at ``failures_per_cell`` failures or ``max_samples`` draws.
    """
    spec = as_spec(task)
    gen = gen or GenerationConfig()
    one = GenerationConfig(1, gen.temperature, gen.max_tokens, gen.endpoint, gen.model, gen.cache_path, gen.timeout_s)
    hist = {}
    for hints in hint_subsets:
        prompt = assemble_prompt(bundle_for(spec.name, "zero", hints))
        counts = Counter({c: 0 for c in ErrorCategory})
        n_fail = 0
        for i in range(max_samples):
            if n_fail >= failures_per_cell:
                break
            response = generate_candidates(prompt, one, start_index=i)[0]
            cand = check_candidates([response])[0]
            trace = None
            if cand.valid:
                trace = interpret(cand.program, spawn_task(spec, seed + i))
                if trace.success:
                    continue
            counts[classify_failure(response, trace, spec.is_search_task)] += 1
            n_fail += 1
        hist[hint_label(hints)] = counts
    return hist
