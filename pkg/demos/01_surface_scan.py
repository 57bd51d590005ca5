#!/usr/bin/env python3
"""Scan the clamped family of two model molecules and look at the surfaces.

The heavy coordinate is frozen slice by slice; at every slice the light
particle's 1-D problem is diagonalized, and the resulting energy ladders
trace out the surfaces the heavy particle will later live on. For the
coupled-harmonic model the surfaces are exact parabolas with a constant
ladder spacing; for the soft-Coulomb "molecule" the ground surface has a
genuine minimum where the bound complex is stable.
"""

import numpy as np

from bolab import (HarmonicCoupling, ModelSpec, SoftCoulomb, build_grid,
                   heavy_gap_report, scan_pes)
from bolab.bo import solve_nuclear
from bolab.diagnostics import nuclear_region, t1_scale_candidates

harmonic = ModelSpec(M=2000.0, m=1.0, potential=HarmonicCoupling(k1=1.0, k2=1.0))
molecule = ModelSpec(M=100.0, m=1.0, potential=SoftCoulomb(z=1.0, s=1.0, k1=1.0))

print("=== coupled-harmonic model, M/m = 2000 ===")
g1 = build_grid(-0.65, 0.65, 128)
g2 = build_grid(-5.5, 5.5, 128)
field = scan_pes(harmonic, g1, g2, A=3)
print(f"scanned {g1.n} slices, {field.n_surfaces} surfaces")
print(f"ladder spacing lambda_1 - lambda_0: {np.mean(field.energies[1] - field.energies[0]):.6f}"
      f"  (closed form sqrt(k2/m) = 1)")

# is the inter-surface gap large compared to the heavy kinetic scale?
sol = solve_nuclear(field, harmonic, a=0, n_levels=2)
region = nuclear_region(sol.theta(0))
t1 = t1_scale_candidates(sol, harmonic.M)["level_spacing"]
report = heavy_gap_report(field, region, t1)
print(f"gap report over [{region[0]:.3f}, {region[1]:.3f}]:"
      f" min gap = {report.min_gap:.4f}, T1 scale = {report.t1_scale:.4f},"
      f" ratio = {report.ratio:.1f}, ok = {report.heavy_ok}")

print()
print("=== soft-Coulomb model, M/m = 100 ===")
g1sc = build_grid(-1.6, 1.6, 96)
g2sc = build_grid(-10.0, 10.0, 192)
field_sc = scan_pes(molecule, g1sc, g2sc, A=2)
i_min = int(np.argmin(field_sc.energies[0]))
print(f"ground surface minimum {field_sc.energies[0, i_min]:.6f} at x1 = {g1sc.points[i_min]:+.4f}")
print(f"binding ladder at the minimum: lambda_0 = {field_sc.energies[0, i_min]:.4f},"
      f" lambda_1 = {field_sc.energies[1, i_min]:.4f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for a in range(3):
        axes[0].plot(g1.points, field.energies[a], label=f"a = {a}")
    axes[0].set_title("coupled harmonic")
    for a in range(2):
        axes[1].plot(g1sc.points, field_sc.energies[a], label=f"a = {a}")
    axes[1].set_title("soft Coulomb")
    for ax in axes:
        ax.set_xlabel("x1")
        ax.set_ylabel("surface energy")
        ax.legend()
    fig.tight_layout()
    fig.savefig("surfaces.png", dpi=120)
    print("\nwrote surfaces.png")
except ImportError:
    print("\n(matplotlib not available, skipping the plot)")
