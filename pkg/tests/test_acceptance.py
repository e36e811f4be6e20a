"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""
import itertools
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from compliant_codegen.bench import (
    CannedPolicy,
    PtpCodegen,
    Scripted,
    balanced_seeds,
    run_evaluation,
    run_robustness,
)
from compliant_codegen.conditions import CompareOp, Comparison, all_of, any_of, evaluate_condition
from compliant_codegen.control import (
    DEFAULT_CONFIG,
    ControlConfig,
    ControllerState,
    MoveCommand,
    admittance_step,
    execute_compliant_move,
    gains_from_stiffness,
)
from compliant_codegen.llm import (
    GenerationConfig,
    RegressionConfig,
    assemble_prompt,
    bundle_for,
    check_candidates,
    completer,
    digit_space_format,
    generate_candidates,
    regression_probe,
)
from compliant_codegen.movescript import ParseError, check_source, parse, print_program
from compliant_codegen.pose_math import Pose
from compliant_codegen.sim import spawn_task, task_spec

sys.path.insert(0, os.path.dirname(__file__))
from movescript_corpus import SEEDED_VIOLATIONS, corpus, random_token_streams  # noqa: E402

REFERENCE = CannedPolicy("reference")


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def criterion_1():
    """Sustained press force against the closed form, and step overshoot."""
    k_p, k_e, d = 400.0, 1e4, 0.005
    expected = k_p * d * k_e / (k_p + k_e)

    def run():
        world = spawn_task(task_spec("fmb-circle"), 0)
        out = execute_compliant_move(world, MoveCommand(Pose([0, 0, -d], [0, 0, 0]), timeout_s=5.0),
                                     ControlConfig(dt=1e-4))
        gains = gains_from_stiffness([k_p] * 6, [1.0] * 6)
        step = 0.01
        s = ControllerState(Pose.identity(), np.zeros(6), Pose([0, 0, step], [0, 0, 0]))
        peak = 0.0
        for _ in range(2000):
            s = admittance_step(s, gains, np.zeros(6), np.zeros(6), 1e-3, DEFAULT_CONFIG.speed_limits())
            peak = max(peak, s.x.translation[2])
        return out.final_status.z_force, max(0.0, (peak - step) / step)

    (force, overshoot), dt = timed(run)
    rel = abs(force - expected) / expected
    ok = rel <= 0.01 and overshoot < 0.01 and dt < 5.0
    return ok, (f"force {force:.4f} N vs {expected:.4f} N (rel {rel:.2e}), overshoot {100 * overshoot:.3f}%, "
                f"{dt:.1f} s")


def criterion_2():
    """Peg-insertion table structure."""
    def run():
        circle = run_evaluation("fmb-circle", REFERENCE, 10)
        s_circle = run_evaluation("fmb-circle", Scripted(), 10)
        s_star = run_evaluation("fmb-star", Scripted(), 10)
        half = run_evaluation("fmb-halfpipe", REFERENCE, seeds=balanced_seeds("fmb-halfpipe", 10))
        return circle.successes, s_circle.successes, s_star.successes, half.successes

    (c, sc, ss, h), dt = timed(run)
    ok = c == 10 and sc == 10 and ss <= 2 and abs(h - 5) <= 1 and dt < 60
    return ok, f"circle ref {c}/10, scripted circle {sc}/10, scripted star {ss}/10, half-pipe ref {h}/10, {dt:.1f} s"


def criterion_3():
    """Point-to-point rewrites fault; compliant originals succeed on the cable tasks."""
    def run():
        return (run_evaluation("rgmc-route", PtpCodegen(), 10), run_evaluation("rgmc-unroute", PtpCodegen(), 10),
                run_evaluation("rgmc-unroute", REFERENCE, 10), run_evaluation("rgmc-route", REFERENCE, 10))

    (ptp_route, ptp_unroute, unroute, route), dt = timed(run)
    ok = (ptp_route.successes == 0 and ptp_route.faults >= 8 and ptp_unroute.faults >= 8
          and unroute.successes >= 9 and route.successes == 10 and dt < 60)
    return ok, (f"ptp route {ptp_route.successes}/10 ({ptp_route.faults} faults), ptp unroute faults "
                f"{ptp_unroute.faults}/10, unroute {unroute.successes}/10, route {route.successes}/10, {dt:.1f} s")


def criterion_4():
    """Connector success drops under perception noise but keeps a floor."""
    exact = run_evaluation("nist-connector", REFERENCE, 10)
    noisy = run_evaluation("nist-connector-perception", REFERENCE, 10)
    ok = exact.successes >= 9 and 4 <= noisy.successes < exact.successes
    return ok, f"exact {exact.successes}/10, perception {noisy.successes}/10"


def criterion_5():
    """Unroute from both sides; the point-to-point rewrite fails from the right."""
    def run():
        left, right = run_robustness(REFERENCE, 10)
        _, ptp_right = run_robustness(PtpCodegen(), 10)
        return left.successes, right.successes, ptp_right.successes

    (left, right, ptp_right), dt = timed(run)
    ok = left >= 8 and right >= 8 and ptp_right <= 4 and dt < 30
    return ok, f"left {left}/10, right {right}/10, ptp right {ptp_right}/10, {dt:.1f} s"


def criterion_6():
    """Round-trip corpus, seeded violations and parser fuzzing."""
    progs = corpus()
    round_trips = sum(parse(print_program(parse(src))) == parse(src) for _, src in progs)
    flagged = sum(bool(check_source(src, strict_range=True)[1]) for _, src, _ in SEEDED_VIOLATIONS)
    crashes = 0
    for text in random_token_streams(10_000):
        try:
            parse(text)
        except ParseError:
            pass
        except Exception:
            crashes += 1
    ok = len(progs) >= 20 and round_trips == len(progs) and flagged == len(SEEDED_VIOLATIONS) and crashes == 0
    return ok, (f"round-trip {round_trips}/{len(progs)}, violations flagged {flagged}/{len(SEEDED_VIOLATIONS)}, "
                f"fuzz crashes {crashes}/10000")


def criterion_7():
    """Exhaustive comparator and conjunction truth table against a brute-force oracle."""
    eps, c = 0.05, 0.4
    values = [c - 1, c - eps - 1e-9, c - eps, c - 0.01, c, c + 0.01, c + eps, c + eps + 1e-9, c + 1]

    def oracle(op, v):
        inside = -eps <= v - c <= eps
        return {CompareOp.GE: not v < c, CompareOp.LE: not v > c,
                CompareOp.APPROX_EQ: inside, CompareOp.APPROX_NEQ: not inside}[op]

    checked = mismatches = 0
    for op1, op2 in itertools.product(CompareOp, repeat=2):
        a, b = Comparison(op1, "x_force", c), Comparison(op2, "z_force", c)
        for v1, v2 in itertools.product(values, repeat=2):
            status = {"x_force": v1, "z_force": v2}
            r1, r2 = oracle(op1, v1), oracle(op2, v2)
            pairs = [(all_of(a, b), r1 and r2), (any_of(a, b), r1 or r2), (a, r1), (b, r2)]
            for cond, want in pairs:
                checked += 1
                mismatches += evaluate_condition(cond, status) != want
    return mismatches == 0, f"{checked - mismatches}/{checked} cases agree"


def criterion_8():
    got = digit_space_format("f(1.393)=4.107")
    return got == "f(1.3 9 3)=4.1 0 7", repr(got)


def criterion_9():
    """Two separate processes replay the shipped cache to identical bytes."""
    cmd = [sys.executable, "-m", "compliant_codegen.bench.cli", "run", "--method", "ours-few",
           "--task", "rgmc-unroute", "--report", "json"]
    env = {k: v for k, v in os.environ.items() if not k.startswith("CODEGEN_LLM_")}
    outs = [subprocess.run(cmd, capture_output=True, env=env, check=False) for _ in range(2)]
    ok = all(o.returncode == 0 for o in outs) and outs[0].stdout == outs[1].stdout and outs[0].stdout
    return bool(ok), f"exit codes {[o.returncode for o in outs]}, {len(outs[0].stdout)} bytes, identical={outs[0].stdout == outs[1].stdout}"


def criterion_10():
    """Live endpoint only: one of five few-shot candidates validates; digit-spaced regression error."""
    if not os.environ.get("CODEGEN_LLM_ENDPOINT"):
        return None, "skipped: CODEGEN_LLM_ENDPOINT is not set"
    import tempfile
    with tempfile.TemporaryDirectory() as tmp:
        cfg = GenerationConfig(cache_path=tmp)
        cands = check_candidates(generate_candidates(assemble_prompt(bundle_for("rgmc-unroute", "few")), cfg))
        valid = sum(c.valid for c in cands)
        err = regression_probe(RegressionConfig(num_pairs=10, decimals=3), completer(cfg)).error
    return valid >= 1 and err <= 0.05, f"{valid}/5 valid candidates, regression error {err:.4f}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def report_line(i, ok, detail):
    status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
    return f"[{status}] criterion {i}: {detail}"


@pytest.mark.parametrize("i", range(1, len(CRITERIA) + 1))
def test_criterion(i, capsys):
    ok, detail = CRITERIA[i - 1]()
    with capsys.disabled():
        print("\n" + report_line(i, ok, detail))
    if ok is None:
        pytest.skip(detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        results.append(ok)
        print(report_line(i, ok, detail), flush=True)
    sys.exit(0 if all(r is not False for r in results) else 1)
