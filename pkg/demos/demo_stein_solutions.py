"""Solving the Stein equation f - E f = (1/2) a g' + b g for named targets.

The solver returns the centered solution g with its residual checkable on
any interior grid; for the standard normal and f(x) = x the solution is the
constant -1, a useful exactness probe.

Run:  python3 demos/demo_stein_solutions.py
"""
import numpy as np

from chaoslimits import (
    beta_target,
    gamma_target,
    normal_target,
    stein_solution,
    stein_solution_residual,
)

targets = (normal_target(1.0), gamma_target(2.0, 1.0), beta_target(2.0, 3.0))
tests = (("x", lambda y: y), ("x^2", lambda y: y ** 2))

for t in targets:
    xs = t.interior_grid(200)
    print(f"{t.name}{t.params} on support {t.support}")
    for label, f in tests:
        res = stein_solution_residual(t, f, xs)
        print(f"   f = {label:<4} max residual on 200-point grid:"
              f" {float(np.max(np.abs(res))):.3e}")

g = stein_solution(normal_target(1.0), lambda y: y)
xs = np.linspace(-3, 3, 7)
print("\nnormal, f(x) = x: g(x) =", np.round(g(xs), 12), " (the constant -1)")
