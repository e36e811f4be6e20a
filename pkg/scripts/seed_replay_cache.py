"""Write the shipped replay-cache entries for the few-shot unroute prompt.

The entries hold a hand transcription of a published model response (a
strategy list plus the reference unroute program), not output recorded from a
live endpoint. Re-run this after changing any prompt text.
"""
from compliant_codegen.bench.methods import reference_path
from compliant_codegen.llm.client import DEFAULT_MODEL, SHIPPED_CACHE, ReplayCache
from compliant_codegen.llm.prompts import assemble_prompt, bundle_for

STRATEGY = """Strategy:
1. Grasp the cable and lift it until the lip of the tunnel pushes back.
2. Slide right until the tunnel wall pushes back.
3. Slide left until the wall on that side pushes back; on the way the cable passes under the opening.
4. Lift again so the cable leaves through the opening.

Program:
"""


def main():
    src = reference_path("rgmc-unroute").read_text(encoding="utf-8")
    body = "\n".join(line for line in src.splitlines() if not line.startswith("#"))
    response = STRATEGY + "```\n" + body.strip() + "\n```\n"
    prompt = assemble_prompt(bundle_for("rgmc-unroute", "few"))
    cache = ReplayCache(SHIPPED_CACHE)
    for i in range(5):
        print(cache.put(prompt, i, DEFAULT_MODEL, 0.0, response))


if __name__ == "__main__":
    main()
