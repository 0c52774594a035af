"""Tour of the sparse kernel algebra: integrals, products, exact moments.

Run:  python3 demos/demo_chaos_arithmetic.py
"""
import numpy as np

from chaoslimits import (
    ChaosVector,
    SymmetricKernel,
    chaos_product,
    contract,
    eval_multiple_integral,
    moment3,
    moment4,
    sample_gaussian,
    wick_moment,
)

# F = I_2(f) with f = e0 (x) e0 + half weight on the {0,1} orbit.
f = SymmetricKernel(dim=2, order=2, entries={(0, 0): 1.0, (0, 1): 0.5})
print("kernel f:", dict(f.entries))
print("E[F^2] = 2! ||f||^2 =", f.scaled_norm_sq())

# Pathwise, I_2(f) = (x0^2 - 1) + 2 * 0.5 * x0 x1.
x = sample_gaussian(2, 4, seed=0)
print("I_2(f) at 4 sample points:", eval_multiple_integral(f, x))
direct = (x[:, 0] ** 2 - 1) + x[:, 0] * x[:, 1]
print("hand-expanded values:     ", direct)

# The product of two multiple integrals expands into a finite chaos sum.
F = ChaosVector.from_kernel(f)
F2 = chaos_product(F, F)
print("\nchaos levels of F^2:", sorted(F2.components))
print("E[F^2] again, as the level-0 part of F*F:", F2.expectation())

# Third and fourth moments come from contraction norms, no sampling involved.
print("\nE[F^3] =", moment3(f), " E[F^4] =", moment4(f))
print("same numbers via Wick pairing:",
      wick_moment([f], [3]), wick_moment([f], [4]))

# Contractions pair r arguments of each factor; r = 1 leaves a 2-index block.
half = contract(f, f, 1).symmetrized()
print("\n||f x_1 f||^2 =", half.norm_sq(),
      " (this drives the fourth-moment excess E[F^4] - 3 E[F^2]^2)")
excess = moment4(f) - 3 * f.scaled_norm_sq() ** 2
print("E[F^4] - 3 E[F^2]^2 =", excess)
