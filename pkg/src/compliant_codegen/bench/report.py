"""Report serialization: a text table, CSV (one row per rollout) and JSON."""
from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import asdict, fields
from pathlib import Path

from .evaluation import Report, RolloutRecord


class ReportFormat(enum.Enum):
    TABLE = "table"
    CSV = "csv"
    JSON = "json"


REPORT_FIELDS = [f.name for f in fields(Report) if f.name not in ("rollouts", "metadata")]
ROLLOUT_FIELDS = [f.name for f in fields(RolloutRecord)]
CSV_COLUMNS = REPORT_FIELDS + ["metadata"] + [f"rollout_{n}" for n in ROLLOUT_FIELDS]

_INT = {"n_evals", "successes", "failures", "faults", "seed", "rollout_seed", "rollout_fault_index"}
_FLOAT = {"wall_clock_s", "rollout_sim_time_s"}
_BOOL = {"rollout_success", "rollout_faulted", "rollout_aborted"}


def _pct(rep: Report) -> str:
    return f"{round(100 * rep.success_rate)}%"


def _task_label(rep: Report) -> str:
    side = rep.metadata.get("side")
    return f"{rep.task} ({side})" if side else rep.task


def render_table(reports) -> str:
    head = ["Task", "Method", "Success", "Successes", "Faults", "Evals"]
    rows = [[_task_label(r), r.method, _pct(r), str(r.successes), str(r.faults), str(r.n_evals)]
            for r in reports if r.n_evals]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(head)]
    line = lambda cells: "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"
    out = [line(head), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    out += [line(row) for row in rows]
    for r in reports:
        if r.reason:
            out.append(f"note: {r.task} / {r.method}: {r.reason}")
    return "\n".join(out) + "\n"


def report_to_dict(rep: Report) -> dict:
    return asdict(rep)


def report_from_dict(d: dict) -> Report:
    d = dict(d)
    d["rollouts"] = [RolloutRecord(**r) for r in d.get("rollouts", [])]
    return Report(**d)


def render_json(reports) -> str:
    return json.dumps([report_to_dict(r) for r in reports], indent=2, sort_keys=True) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def render_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        if not rep.rollouts and rep.n_evals == 0:
            continue
        base = [_cell(getattr(rep, n)) for n in REPORT_FIELDS] + [json.dumps(rep.metadata, sort_keys=True)]
        if not rep.rollouts:
            w.writerow(base + [""] * len(ROLLOUT_FIELDS))
        for r in rep.rollouts:
            w.writerow(base + [_cell(getattr(r, n)) for n in ROLLOUT_FIELDS])
    return buf.getvalue()


def _convert(col: str, text: str):
    if col == "rollout_statuses":
        return text
    if text == "":
        return None
    if col in _INT:
        return int(text)
    if col in _FLOAT:
        return float(text)
    if col in _BOOL:
        return text == "True"
    return text


def parse_csv(text: str) -> list[Report]:
    reports: dict = {}
    for row in csv.DictReader(io.StringIO(text)):
        vals = {c: _convert(c, row[c]) for c in CSV_COLUMNS}
        key = tuple(row[n] for n in REPORT_FIELDS) + (row["metadata"],)
        if key not in reports:
            rep = Report(**{n: vals[n] for n in REPORT_FIELDS})
            rep.metadata = json.loads(row["metadata"])
            reports[key] = rep
        if row["rollout_seed"] != "":
            reports[key].rollouts.append(RolloutRecord(**{n: vals[f"rollout_{n}"] for n in ROLLOUT_FIELDS}))
    return list(reports.values())


def parse_json(text: str) -> list[Report]:
    return [report_from_dict(d) for d in json.loads(text)]


def render(reports, fmt) -> str:
    fmt = ReportFormat(fmt)
    if isinstance(reports, Report):
        reports = [reports]
    if fmt is ReportFormat.TABLE:
        return render_table(reports)
    if fmt is ReportFormat.CSV:
        return render_csv(reports)
    return render_json(reports)


def emit_report(reports, fmt, path) -> Path:
    """Write ``reports`` (one or a list) to ``path``; OSError propagates if unwritable."""
    path = Path(path)
    text = render(reports, fmt)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def read_report(path, fmt) -> list[Report]:
    text = Path(path).read_text(encoding="utf-8")
    fmt = ReportFormat(fmt)
    if fmt is ReportFormat.CSV:
        return parse_csv(text)
    if fmt is ReportFormat.JSON:
        return parse_json(text)
    raise ValueError("tables are not read back")
