"""Run the cable unrouting program statement by statement, then its stiff rewrite.

The compliant program lifts until the lip snags, then sweeps to one side and back
across to the other. The sweeps start in contact and re-tare the sensor, so they end
on their timeouts rather than on a force; the sweep that passes under the opening
lets the cable rise into it and the last lift pulls it free. The point-to-point
rewrite visits the same waypoints and trips the force limit at the lip.
"""
from compliant_codegen.bench import reference_program, to_ptp
from compliant_codegen.movescript import interpret, print_program
from compliant_codegen.movescript.printer import format_statement
from compliant_codegen.sim import spawn_task, task_spec
from compliant_codegen.sim.tasks import Side

prog = reference_program("rgmc-unroute")
print(print_program(prog))

for side in Side:
    world = spawn_task(task_spec("rgmc-unroute", side=side), seed=0)
    trace = interpret(prog, world)
    print(f"--- start on the {side.value}, {1000 * world.named_pose(1).translation[0]:+.1f} mm from center")
    for rec in trace.records:
        o = rec.outcome
        if o is None:
            print(f"  {format_statement(rec.statement)}")
            continue
        s = o.final_status
        print(f"  {o.status.name:<10} after {o.elapsed_s:5.2f} s  fx {s.x_force:+.2f}  fz {s.z_force:+.2f}")
    print(f"  success: {trace.success}")

trace = interpret(to_ptp(prog), spawn_task(task_spec("rgmc-unroute", side=Side.RIGHT), seed=0))
print(f"point-to-point rewrite: fault at statement {trace.fault_index}, success {trace.success}")
