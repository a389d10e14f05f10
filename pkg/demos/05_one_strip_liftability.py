"""When is a single strip with no boundary forces liftable?

For two curves with both boundary edge stresses forced to zero, the balance
system has closed-form tension solutions, and consistency collapses to one
determinant identity in the first three derivatives of the two curves.
A projected cylinder satisfies it; a generic perturbed strip does not.

One subtlety: the closed-form tensions are strictly positive, but the
balance may need the two tensions to carry opposite signs (a cylinder does:
one boundary pushes while the other pulls).  The report exposes that
relative scale as the coupling constant, fitted from the cross equation.
"""

import numpy as np

import striplift as sl

cylinder = sl.project(sl.builtin("cylinder-strip3d")).framework
report = sl.onestrip_verify(cylinder)
print("projected cylinder strip:")
print(f"  criterion residual max: {report.criterion_max:.3e}  -> verdict {report.verdict}")
print(f"  coupling constant: {report.coupling:+.6f} (sign diagnostic {report.coupling_sign:+d})")
print(f"  balance residual of the assembled stress: {report.equilibrium_max:.3e}")

# With the coupling folded in, the assembled stress lifts to a surface whose
# two boundary curves are planar, as vanishing boundary forces demand.
stress = sl.assemble_stress(
    cylinder, report.lambda0, report.coupling * report.lambda1, report.mu0
)
lifted = sl.build_lifting(cylinder, stress)
first, last = sl.boundary_planarity(lifted)
print(f"  lifted boundary plane-fit distances: {first:.3e}, {last:.3e}")
print(f"  first lifted curve is flat at height 0: max |z_0| = {np.abs(lifted.z[0]).max():.3e}")

perturbed = sl.builtin("perturbed2d", seed=1, amplitude=0.05)
bad = sl.onestrip_verify(perturbed)
print("\nperturbed strip:")
print(f"  criterion residual max: {bad.criterion_max:.3e}  -> verdict {bad.verdict}")

# A cone frustum (concentric circles) is also liftable; its coupling is the
# negative radius ratio.
cone = sl.builtin("circles2d", n=1)
cone_report = sl.onestrip_verify(cone)
print("\nconcentric circles (cone frustum):")
print(f"  verdict {cone_report.verdict}, coupling {cone_report.coupling:+.6f}")
