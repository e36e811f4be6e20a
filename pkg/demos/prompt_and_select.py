"""From prompt to program: assemble, replay five answers, pick one, triage failures."""
import json
from collections import Counter

from compliant_codegen.llm import (
    GenerationConfig,
    assemble_prompt,
    bundle_for,
    check_candidates,
    classify_failure,
    generate_candidates,
    select_best,
)
from compliant_codegen.llm.client import SHIPPED_CACHE
from compliant_codegen.movescript import interpret, print_program
from compliant_codegen.sim import spawn_task, task_spec

prompt = assemble_prompt(bundle_for("rgmc-unroute", "few"))
print(prompt)

# replay only: no endpoint, the shipped cache answers
cfg = GenerationConfig(endpoint=None, model="gpt-4", cache_path=SHIPPED_CACHE)
responses = generate_candidates(prompt, cfg)
print(f"{len(responses)} responses, first one:\n{responses[0]}\n")
prog = select_best(responses)
print("selected program:\n" + print_program(prog))

# hand-labelled failing zero-shot answers, and what the classifier makes of them
corpus = json.loads((SHIPPED_CACHE.parent / "failure_corpus" / "rgmc_unroute_zero_shot.json").read_text())
spec = task_spec("rgmc-unroute")
tally = Counter()
for entry in corpus:
    cand = check_candidates([entry["response"]])[0]
    trace = interpret(cand.program, spawn_task(spec, 0)) if cand.valid else None
    got = classify_failure(entry["response"], trace, spec.is_search_task).value
    tally[got == entry["label"]] += 1
    if got != entry["label"]:
        print(f"disagreement on #{entry['id']}: labelled {entry['label']}, classified {got} ({entry['note']})")
print(f"classifier agrees on {tally[True]} of {len(corpus)}")
