"""The converse direction: projecting a conjugate surface induces a stress.

Dropping the height coordinate of a surface with developable strips leaves
a planar framework, and closed-form combinations of the height derivatives
give stress functions that balance it exactly.  Projecting a lifting built
by this package recovers (diagnostically) the stress that generated it.
"""

import numpy as np

import striplift as sl
from striplift.projection import recovered_interior_stress

surface = sl.builtin("translational3d")
print("input surface: translated copies of one space curve")
print(f"conjugacy residual: {sl.conjugacy_residual(surface):.3e}")

proj = sl.project(surface)
worst, where = sl.developability_report(proj)
print(f"developability defect after projection: {worst:.3e} at {where}")

stress = sl.induced_stress(proj)
report = sl.residual_report(proj.framework, stress)
print(f"induced stress: {report.summary()}")

# Lift the induced stress and project back: the recovered interior stress
# rows agree with the generator (a diagnostic, not a guaranteed identity:
# boundary heights are not part of a lifting).
lifted = sl.build_lifting(proj.framework, stress)
back = sl.project(lifted)
rows = recovered_interior_stress(back)
for i, row in sorted(rows["lambda"].items()):
    dev = np.abs(row - stress.lam_at(i)).max() / np.abs(stress.lam).max()
    print(f"recovered curve stress {i}: relative deviation {dev:.3e}")
for i, row in sorted(rows["mu"].items()):
    dev = np.abs(row - stress.mu_at(i)).max() / np.abs(stress.mu).max()
    print(f"recovered edge stress {i}:  relative deviation {dev:.3e}")

# A surface with a twisted strip is rejected by the stress formulas.
curves = []
for i in surface.curve_indices:
    x, y, z = surface.curve(i).coords
    twist = sl.CoordFunction((0.0,), ((0.3 * i, 2.0, 0.4 * i),))
    curves.append(sl.AnalyticCurve((x, y, sl.combine(z, 1.0, twist, 1.0))))
twisted = sl.AnalyticSurface3D(surface.T, surface.n, curves)
try:
    sl.induced_stress(sl.project(twisted))
except sl.NotConjugateError as exc:
    print(f"\ntwisted surface refused: {exc}")
