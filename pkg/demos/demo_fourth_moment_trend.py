"""The fourth-moment route to the CLT, measured exactly along a family.

f_m = (2m)^{-1/2} sum_{i<m} e_i (x) e_i gives F_m = (2m)^{-1/2} sum (x_i^2-1),
a normalized chi-square average that converges to N(0,1).  Every distance
proxy below decays exactly like 1/m -- the trend table shows the ratio 2
between consecutive doublings.

Run:  python3 demos/demo_fourth_moment_trend.py
"""
from chaoslimits import gaussian_clt_family, normal_target, run_family_diagnostics

report = run_family_diagnostics(
    gaussian_clt_family(), ms=[2, 4, 8, 16, 32, 64], target=normal_target(1.0)
)

print(f"family {report.family}, order {report.order},"
      f" target {report.target_name} with coeff {report.coeff}")
print(f"classifier verdict: {report.verdict.kind} -- {report.verdict.reason}\n")

header = f"{'m':>4} {'E F^2':>8} {'E F^4':>10} {'||f x1 f||^2':>14} {'stein L2':>12}"
print(header)
for rec in report.members:
    print(f"{rec['m']:>4} {rec['ef2']:>8.4f} {rec['ef4']:>10.6f}"
          f" {rec['contraction_norms'][1] ** 2:>14.6e}"
          f" {rec['stein_residual_l2_chaos']:>12.6e}")

print("\nratios between consecutive m (all -> 2, the 1/m law):")
for key, vals in report.trends.items():
    print(f"  {key:<28} {[round(v, 6) for v in vals]}")
