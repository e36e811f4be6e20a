"""Benchmark protocol: methods, seeded evaluation, reports and the ``bench`` CLI."""
from .evaluation import (
    HINT_SUBSETS,
    Report,
    RolloutRecord,
    balanced_seeds,
    obtain_program,
    run_evaluation,
    run_hint_ablation,
    run_robustness,
)
from .methods import (
    CannedPolicy,
    FixedCompliance,
    Ours,
    PtpCodegen,
    Scripted,
    method_name,
    parse_method,
    reference_program,
    scripted_program,
    spiral_offsets,
    to_fixed_compliance,
    to_ptp,
)
from .report import ReportFormat, emit_report, read_report, render
