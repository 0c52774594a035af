"""Which invariant laws can a fixed-order chaos sequence converge to?

The answer depends only on the coefficient a(x) = alpha x^2 + beta x + gamma
of the diffusion that leaves the target invariant.  The sign analysis of the
constant C0 and of the root-equation discriminant sorts every target into
one of four classes.

Run:  python3 demos/demo_classifier_tour.py
"""
import math

from chaoslimits import NAMED_TARGETS, classifier, named_target

EXAMPLES = [
    ("normal", {"gamma": 1.0}),
    ("student", {"nu": 5.0}),
    ("uniform", {}),
    ("beta", {"a": 2.0, "b": 2.0}),
    ("gamma", {"a": 2.0, "lam": 1.0}),
    ("pareto", {"nu": 3.0}),
    ("pareto", {"nu": 5.0}),
    ("f", {"a": 6.0, "b": 10.0}),
    ("inverse_gamma", {"delta": 3.0, "lam": 5.0}),
]

print(f"{'target':<28} {'alpha':>7} {'beta':>7} {'gamma':>7}  verdict")
for name, params in EXAMPLES:
    t = named_target(name, **params)
    al, be, ga = t.coeff.as_tuple()
    v = classifier(al, be, ga,
                   all_even_moments_finite=not math.isfinite(t.moment_bound))
    label = f"{name}{tuple(params.values())}"
    print(f"{label:<28} {al:>7.3f} {be:>7.3f} {ga:>7.3f}  {v.kind}")
    print(f"{'':28} {v.reason}")

print("\navailable named targets:", ", ".join(sorted(NAMED_TARGETS)))
