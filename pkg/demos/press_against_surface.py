"""Press the flange into a flat surface and watch the admittance controller settle.

With stiffness K_p pulling toward a target d below a surface of stiffness k_e the
flange sinks until the two springs balance, so the contact force should settle at
K_p * d * k_e / (K_p + k_e).
"""
import numpy as np

from compliant_codegen.control import ControlConfig, MoveCommand, execute_compliant_move
from compliant_codegen.pose_math import Pose
from compliant_codegen.sim import spawn_task, task_spec

k_p, k_e = 400.0, 1e4
world = spawn_task(task_spec("fmb-circle"), seed=0)   # empty gripper over the board surface at z = 0

for d in (0.002, 0.005, 0.01):
    world.place_flange(world.named_pose(0))
    out = execute_compliant_move(world, MoveCommand(Pose([0, 0, -d], [0, 0, 0]), timeout_s=2.0),
                                 ControlConfig(dt=1e-4))
    expected = k_p * d * k_e / (k_p + k_e)
    print(f"target {1000 * d:4.1f} mm below: force {out.final_status.z_force:.4f} N "
          f"(closed form {expected:.4f} N), penetration {-1000 * world.x[2]:.3f} mm")

# the trace keeps the force profile; the first contact is where it rises above zero
t, fz = out.trace[:, 0], out.trace[:, 3]
first = int(np.argmax(fz > 0))
print(f"contact after {t[first]:.3f} s, force within 1% after {t[np.argmax(np.abs(fz / fz[-1] - 1) < 0.01)]:.3f} s")
