#!/usr/bin/env python3
"""How fast the adiabatic trial state converges as the mass ratio grows.

The sweep runs the whole pipeline at M/m in {10, 100, 1000, 2000}, scoring
the trial state's energy against the exact ground at each ratio. The error
collapses much faster than the small parameter (m/M)^(1/4) itself: the
fitted log-log slope against that parameter comes out around six for the
coupled-harmonic family.
"""

from bolab import HarmonicCoupling, ModelSpec, build_grid
from bolab.diagnostics import kappa_scaling_study

spec = ModelSpec(M=10.0, m=1.0, potential=HarmonicCoupling(k1=1.0, k2=1.0))
g1 = build_grid(-2.4, 2.4, 192)
g2 = build_grid(-8.5, 8.5, 96)

report = kappa_scaling_study(spec, [10.0, 100.0, 1000.0, 2000.0], g1, g2,
                             A=2, nuclear_levels=2)

print(f"{'M/m':>6} {'(m/M)^1/4':>10} {'trial <H>':>14} {'exact':>14} "
      f"{'rel err':>10} {'gap/T1':>8} {'min sx*sp':>10}")
for row in report.rows:
    print(f"{row.mass_ratio:6.0f} {row.kappa:10.4f} {row.rayleigh_quotient:14.8f} "
          f"{row.exact_energy:14.8f} {row.relative_error:10.2e} "
          f"{row.heavy.ratio:8.1f} {row.min_uncertainty_product:10.6f}")

print(f"\nlog(rel err) vs log((m/M)^1/4) slope: {report.error_kappa_slope:.2f}")
print("(anything >= 2 means at least quadratic suppression in the small parameter)")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    kappas = [r.kappa for r in report.rows]
    errs = [r.relative_error for r in report.rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(kappas, errs, "o-")
    ax.set_xlabel("(m/M)^{1/4}")
    ax.set_ylabel("relative energy error")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig("scaling.png", dpi=120)
    print("wrote scaling.png")
except ImportError:
    pass
