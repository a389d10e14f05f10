"""Constructing a self-stress by marching the equilibrium system.

A framework is a stack of smooth planar curves; a stress assigns a tension
function to every curve and a force density to every ruling family.  The
balance at curve i reads

    lam_dot_i * tan_i + lam_i * acc_i + mu_i * edge_i - mu_{i-1} * edge_{i-1} = 0.

Given the curve tensions at t = 0 and the first boundary edge stress as a
function, the system determines everything else, marching left to right in
the curve index and forward in t.
"""

import numpy as np

import striplift as sl

# Two concentric circular strips; the inner- and outermost curves only give
# directions for the boundary forces.
fw = sl.builtin("circles2d", n=2)
print(f"framework: n={fw.n}, curves {list(fw.curve_indices)}, T={fw.T:.4f}")
print(sl.regularity_report(fw).summary())

# March with unit tensions at t=0 and no force on the first boundary edge.
stress = sl.solve_stress(fw, [1.0, -0.5, 0.8], mu_minus1=0.0)
report = sl.residual_report(fw, stress)
print("\nsolved stress:", report.summary())
print("induced outer boundary stress mu_n:", stress.mu_at(fw.n)[:4], "...")

# The same balance, integrated: the net force on any curve segment vanishes.
rng = np.random.default_rng(0)
worst = 0.0
for i in range(fw.n + 1):
    ja, jb = np.sort(rng.integers(0, stress.grid.N + 1, size=2))
    a, b = stress.grid.t[ja], stress.grid.t[jb]
    load = np.linalg.norm(sl.force_load(fw, stress, i, a, b))
    print(f"curve {i}: |force load on [{a:.3f}, {b:.3f}]| = {load:.3e}")

# A stress that is not balanced shows up immediately.
bad_mu = stress.mu.copy()
bad_mu[1] *= 1.1
bad = sl.StressField(stress.grid, stress.lam, bad_mu)
print("\nafter scaling one edge family by 1.1:")
print(sl.residual_report(fw, bad).summary())
