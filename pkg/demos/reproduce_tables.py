"""Success-rate tables for every method the simulator can run without a live model.

ours-few replays the shipped cache; ours-zero has no cached answers and is left out.
Takes about two minutes.
"""
from compliant_codegen.bench import (
    CannedPolicy,
    FixedCompliance,
    Ours,
    PtpCodegen,
    Scripted,
    balanced_seeds,
    render,
    run_evaluation,
    run_robustness,
)

reference = CannedPolicy("reference")
peg = []
for task in ("fmb-circle", "fmb-star", "fmb-halfpipe"):
    seeds = balanced_seeds(task, 10)
    for method in (Scripted(), PtpCodegen(), FixedCompliance(), reference):
        peg.append(run_evaluation(task, method, seeds=seeds, timing=False))
print(render(peg, "table"))

other = []
for task in ("rgmc-unroute", "rgmc-route", "nist-connector", "nist-connector-perception"):
    for method in (PtpCodegen(), FixedCompliance(), reference):
        other.append(run_evaluation(task, method, timing=False))
other.append(run_evaluation("rgmc-unroute", Ours("few"), timing=False))
print(render(other, "table"))

print(render([*run_robustness(reference, timing=False), *run_robustness(PtpCodegen(), timing=False)], "table"))
