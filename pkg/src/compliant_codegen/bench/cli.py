"""``bench`` command line: run, ablate-hints, robustness, probe."""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import replace
from pathlib import Path

from ..llm.client import GenerationConfig, GenerationUnavailable, completer
from ..llm.probes import Formatting, regression_sweep, sinusoid_sweep
from ..sim.tasks import TASK_NAMES, load_task_config, task_spec
from .evaluation import balanced_seeds, run_evaluation, run_hint_ablation, run_robustness
from .methods import parse_method
from .report import ReportFormat, render

METHOD_HELP = ("scripted | ptp | fixed-compliance | ours-zero | ours-few | canned:<path>; "
               "canned:reference runs the shipped reference program for the task")


def _gen_config(args) -> GenerationConfig:
    cfg = GenerationConfig(num_samples=getattr(args, "samples", 5))
    if args.llm_cache:
        cfg = replace(cfg, cache_path=Path(args.llm_cache))
    return cfg


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _task(args, name):
    defaults = load_task_config(args.task_config) if args.task_config else None
    return task_spec(name, defaults)


def cmd_run(args) -> int:
    spec = _task(args, args.task)
    method = parse_method(args.method)
    seeds = balanced_seeds(spec, args.evals, args.seed) if args.balanced else None
    rep = run_evaluation(spec, method, args.evals, args.seed, seeds=seeds, gen=_gen_config(args),
                         timing=args.timing)
    _write(render(rep, args.report), args.out)
    return 0


def cmd_robustness(args) -> int:
    method = parse_method(args.method)
    left, right = run_robustness(method, args.evals, args.seed, gen=_gen_config(args), timing=args.timing)
    _write(render([left, right], args.report), args.out)
    return 0


def cmd_ablate(args) -> int:
    hist = run_hint_ablation(args.task, failures_per_cell=args.failures, gen=_gen_config(args),
                             max_samples=args.max_samples, seed=args.seed)
    lines = ["hints,category,count"]
    for label, counts in hist.items():
        for cat, n in counts.items():
            lines.append(f"{label},{cat.value},{n}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_probe(args) -> int:
    client = completer(_gen_config(args))
    if args.kind == "regression":
        fmts = tuple(Formatting) if args.formatting == "both" else (Formatting(args.formatting),)
        rows = regression_sweep(client, formatting=fmts, seed=args.seed)
    else:
        rows = sinusoid_sweep(client)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _write(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bench", description="Compliant code-generation benchmark runner.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, evals=True):
        sp.add_argument("--llm-cache", help="replay cache directory (default: shipped cache or $CODEGEN_LLM_CACHE)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--task-config", help="INI file with geometry overrides")
        if evals:
            sp.add_argument("--evals", type=int, default=10)
            sp.add_argument("--samples", type=int, default=5)
            sp.add_argument("--report", choices=[f.value for f in ReportFormat], default="table")
            sp.add_argument("--timing", action="store_true", help="record wall-clock time in the report")

    r = sub.add_parser("run", help="evaluate one method on one task")
    r.add_argument("--task", required=True, choices=TASK_NAMES)
    r.add_argument("--method", required=True, help=METHOD_HELP)
    r.add_argument("--balanced", action="store_true", help="balance discrete randomization across seeds")
    common(r)
    r.set_defaults(func=cmd_run)

    rb = sub.add_parser("robustness", help="unroute from left and right starts")
    rb.add_argument("--method", default="canned:reference", help=METHOD_HELP)
    common(rb)
    rb.set_defaults(func=cmd_robustness)

    a = sub.add_parser("ablate-hints", help="classify failing zero-shot candidates per hint subset")
    a.add_argument("--task", default="rgmc-unroute", choices=TASK_NAMES)
    a.add_argument("--failures", type=int, default=15)
    a.add_argument("--max-samples", type=int, default=100)
    common(a, evals=False)
    a.set_defaults(func=cmd_ablate)

    pr = sub.add_parser("probe", help="numeric precision probes")
    pr.add_argument("kind", choices=["regression", "sinusoid"])
    pr.add_argument("--formatting", choices=["both"] + [f.value for f in Formatting], default="both")
    common(pr, evals=False)
    pr.set_defaults(func=cmd_probe)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except GenerationUnavailable as e:
        print(f"bench: generation unavailable: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as e:
        print(f"bench: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
