"""Lifting a self-stressed framework to a surface with developable strips.

Attaching the (path-independent) height as a third coordinate turns a
self-stressed framework into a spatial surface whose strips are all
developable.  The lifting refuses unbalanced stresses, exports to OBJ, and
round-trips through a JSON dump.
"""

from pathlib import Path

import numpy as np

import striplift as sl

out_dir = Path(__file__).parent / "out"

surface = sl.builtin("translational3d")
proj = sl.project(surface)
fw = proj.framework
stress = sl.induced_stress(proj)

lifted = sl.build_lifting(fw, stress)
print(f"lifted {fw.n + 1} curves on {lifted.grid.N + 1} nodes")
print(f"conjugacy residual of the lifting: {sl.conjugacy_residual(lifted):.3e}")
print(f"height range: [{lifted.z.min():+.4f}, {lifted.z.max():+.4f}]")

out_dir.mkdir(exist_ok=True)
obj_path = out_dir / "translational_lifting.obj"
obj_path.write_text(sl.export_obj(lifted, reproducible=True))
print(f"wrote {obj_path}")

dump_path = out_dir / "translational_lifting.json"
dump_path.write_text(sl.save_lifting(lifted))
again = sl.load_lifting(dump_path.read_text())
print(f"JSON dump round trip exact: {np.array_equal(again.z, lifted.z)}")

# An unbalanced stress is refused unless explicitly forced.
bad_mu = stress.mu.copy()
bad_mu[2] *= 1.2
bad = sl.StressField(stress.grid, stress.lam, bad_mu)
try:
    sl.build_lifting(fw, bad)
except sl.NotSelfStressedError as exc:
    print(f"\nrefused as expected: {exc}")
forced = sl.build_lifting(fw, bad, force=True)
print(f"forced lift is labeled path-dependent: {forced.path_dependent}")
