"""Fourth-moment diagnostics: can a chaos sequence reach a given target law?

For F = I_n(f) with E[F^2] -> EX^2, the quantities below control convergence
toward the invariant law of a diffusion with quadratic coefficient
a(x) = alpha x^2 + beta x + gamma:

- ``moment3`` / ``moment4``: exact E[F^3], E[F^4] from contraction norms;
- ``stein_residual_l2``: E[(a(F)/2 - n^{-1}||DF||^2)^2], decomposed by chaos
  level (three independent routes: level decomposition, direct chaos
  subtraction, Monte Carlo);
- ``lemma_l2_combination``: the exact moment combination
  E[F^4 - (3/2) a(F) F^2] whose limit isolates the constant C0;
- ``classifier``: the sign analysis of C0 and of the discriminant of the
  quadratic root equation, which sorts coefficient triples into
  Gaussian-only, Gamma-only, outside-hypotheses and inconsistent classes;
- ``gamma_kernel_gap`` / ``lemma_l11_gap``: the exact kernel fixed-point
  identities that characterize centered-Gamma limits at even order.

``run_family_diagnostics`` evaluates all of it along a kernel family
(built-ins: the CLT family f_m = (2m)^{-1/2} sum_i e_i^{x2} and the constant
Gamma family sum_{i<k} e_i^{x2}) and reports trend ratios over m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chaos import (
    ChaosVector,
    SymmetricKernel,
    chaos_product,
    contract,
    derivative_slices,
    eval_multiple_integral,
    expect_product,
    malliavin_inner,
    sample_gaussian,
)

__all__ = [
    "c_n",
    "moment3",
    "moment4",
    "classifier_c0",
    "classifier_delta",
    "ec_roots",
    "ClassifierVerdict",
    "classifier",
    "stein_residual_l2",
    "stein_residual_l2_direct",
    "stein_residual_l2_mc",
    "stein_discrepancy_l1_mc",
    "prop24_gap",
    "prop24_gap_mc",
    "lemma_l2_combination",
    "gamma_kernel_gap",
    "lemma_l11_gap",
    "KernelFamily",
    "gaussian_clt_family",
    "gamma_fixed_family",
    "BUILTIN_FAMILIES",
    "DiagnosticsReport",
    "run_family_diagnostics",
]

_EXCLUDED_ALPHAS = (1.0, 2.0, 2.0 / 3.0)


def c_n(n):
    """c_n = (n/2)!^3 / n!^2 for even n (c_2 = 1/4, c_4 = 1/72)."""
    if n <= 0 or n % 2:
        raise ValueError("c_n is defined for even n >= 2")
    return math.factorial(n // 2) ** 3 / math.factorial(n) ** 2


def moment3(f):
    """E[I_n(f)^3]; zero for odd n, else (n!^3 / (n/2)!^3) <f, f ~x_{n/2} f>."""
    n = f.order
    if n == 0:
        return f.entries.get((), 0.0) ** 3
    if n % 2:
        return 0.0
    half = contract(f, f, n // 2).symmetrized()
    return math.factorial(n) ** 3 / math.factorial(n // 2) ** 3 * f.inner(half)


def moment4(f):
    """E[I_n(f)^4] = 3 (n! ||f||^2)^2 + 3n sum_p (p-1)! C(n-1,p-1)^2 p!
    C(n,p)^2 (2n-2p)! ||f ~x_p f||^2."""
    n = f.order
    if n == 0:
        return f.entries.get((), 0.0) ** 4
    ef2 = f.scaled_norm_sq()
    total = 3.0 * ef2 * ef2
    for p in range(1, n):
        coef = (
            math.factorial(p - 1) * math.comb(n - 1, p - 1) ** 2
            * math.factorial(p) * math.comb(n, p) ** 2
            * math.factorial(2 * n - 2 * p)
        )
        total += 3.0 * n * coef * contract(f, f, p).symmetrized().norm_sq()
    return total


# --- classifier --------------------------------------------------------------

def classifier_c0(alpha, beta, gamma):
    """C0 = (3/2) alpha [ -4 gamma / ((2-alpha)(2-3alpha))
                          - 3 beta^2 / ((1-alpha)(2-3alpha)) ]."""
    _guard_alpha(alpha)
    return 1.5 * alpha * (
        -4.0 * gamma / ((2.0 - alpha) * (2.0 - 3.0 * alpha))
        - 3.0 * beta**2 / ((1.0 - alpha) * (2.0 - 3.0 * alpha))
    )


def classifier_delta(alpha, beta, gamma):
    """Delta = -144 (alpha/(2-3alpha)) [beta^2/(1-alpha)^2 + 2 gamma/(2-alpha)].

    Same sign as the literal discriminant of the root equation
    (``ec_roots``) whenever gamma/(2-alpha) > 0; zero exactly at alpha = 0.
    """
    _guard_alpha(alpha)
    return -144.0 * alpha / (2.0 - 3.0 * alpha) * (
        beta**2 / (1.0 - alpha) ** 2 + 2.0 * gamma / (2.0 - alpha)
    )


def _guard_alpha(alpha):
    if alpha in _EXCLUDED_ALPHAS:
        raise ValueError(f"alpha = {alpha!r} is an excluded coefficient value")


def ec_roots(alpha, beta, gamma):
    """Real roots c of 3 b^2 c^2 - (12 b^2/(1-a)) c - (8 C0 - 12 b^2/(1-a)) = 0.

    Returns (discriminant, roots tuple); roots is empty when the discriminant
    is negative, and the equation degenerates for beta = 0.
    """
    _guard_alpha(alpha)
    if beta == 0.0:
        raise ValueError("the root equation degenerates for beta = 0")
    c0 = classifier_c0(alpha, beta, gamma)
    qa = 3.0 * beta**2
    qb = -12.0 * beta**2 / (1.0 - alpha)
    qc = -(8.0 * c0 - 12.0 * beta**2 / (1.0 - alpha))
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return disc, ()
    root = math.sqrt(disc)
    return disc, tuple(sorted(((-qb - root) / (2 * qa), (-qb + root) / (2 * qa))))


@dataclass(frozen=True)
class ClassifierVerdict:
    """Outcome of the coefficient sign analysis.

    kind is one of GaussianOnly | GammaOnly | OutsideHypotheses | Inconsistent.
    For GammaOnly, ``gamma_params`` holds the matched (lam, a).  For
    GaussianOnly, ``c0_sign_argument_applies`` records whether the positivity
    argument for C0 is actually available (it needs all even moments of the
    target finite); the C0 formula value is reported either way.
    """

    kind: str
    reason: str
    alpha: float
    beta: float
    gamma: float
    c0: float = None
    delta: float = None
    ec_discriminant: float = None
    roots: tuple = ()
    gamma_params: tuple = None
    c0_sign_argument_applies: bool = None


def classifier(alpha, beta, gamma, all_even_moments_finite=True):
    """Sort a coefficient triple into the reachable-limit classes.

    - alpha in {1, 2, 2/3}: OutsideHypotheses (excluded parameters).
    - beta = 0: GaussianOnly -- within this class only the centered normal
      (alpha = 0) can be a chaos limit.
    - beta != 0, alpha = 0: GammaOnly with lam = 2/beta, a = gamma lam^2/2.
    - beta != 0, 0 < alpha < 2/3: OutsideHypotheses (the discriminant is
      negative; the root equation has no real solution and the sign analysis
      is silent).
    - beta != 0, alpha < 0 or alpha > 2/3: Inconsistent -- the discriminant is
      nonnegative and the real-root argument forces alpha = 0, contradiction:
      no chaos sequence converges to such a target.
    """
    alpha, beta, gamma = float(alpha), float(beta), float(gamma)
    if alpha in _EXCLUDED_ALPHAS:
        return ClassifierVerdict(
            kind="OutsideHypotheses",
            reason=f"alpha = {alpha:g} is excluded (moment formulas degenerate)",
            alpha=alpha, beta=beta, gamma=gamma,
        )
    c0 = classifier_c0(alpha, beta, gamma)
    delta = classifier_delta(alpha, beta, gamma)
    ex2 = gamma / (2.0 - alpha)
    if ex2 <= 0.0:
        return ClassifierVerdict(
            kind="Inconsistent",
            reason=f"forced EX^2 = gamma/(2-alpha) = {ex2:g} <= 0: no probability law",
            alpha=alpha, beta=beta, gamma=gamma, c0=c0, delta=delta,
        )
    if beta == 0.0:
        applies = bool(all_even_moments_finite)
        note = "" if applies else (
            " (sign argument needs all even moments finite, which this target lacks;"
            " formula value reported anyway)"
        )
        return ClassifierVerdict(
            kind="GaussianOnly",
            reason="beta = 0: only the centered normal is reachable in this class"
                   + note,
            alpha=alpha, beta=beta, gamma=gamma, c0=c0, delta=delta,
            c0_sign_argument_applies=applies,
        )
    disc, roots = ec_roots(alpha, beta, gamma)
    if alpha == 0.0:
        lam = 2.0 / beta
        a = gamma * lam * lam / 2.0
        note = "" if beta > 0 else " (beta < 0: reflected Gamma, the law of -Y)"
        return ClassifierVerdict(
            kind="GammaOnly",
            reason=f"beta != 0, alpha = 0: centered Gamma(a={a:g}, lam={lam:g})"
                   + note,
            alpha=alpha, beta=beta, gamma=gamma, c0=c0, delta=delta,
            ec_discriminant=disc, roots=roots, gamma_params=(lam, a),
        )
    if 0.0 < alpha < 2.0 / 3.0:
        return ClassifierVerdict(
            kind="OutsideHypotheses",
            reason="alpha in (0, 2/3): discriminant < 0, no real root;"
                   " the sign analysis does not apply",
            alpha=alpha, beta=beta, gamma=gamma, c0=c0, delta=delta,
            ec_discriminant=disc, roots=roots,
        )
    return ClassifierVerdict(
        kind="Inconsistent",
        reason="alpha outside [0, 2/3] with beta != 0: real roots force"
               " alpha = 0, so no chaos sequence converges to this law",
        alpha=alpha, beta=beta, gamma=gamma, c0=c0, delta=delta,
        ec_discriminant=disc, roots=roots,
    )


# --- Stein residual in L^2 ----------------------------------------------------

def _as_coeff_tuple(coeff):
    """Accept a DiffusionCoefficient or a plain (alpha, beta, gamma) triple."""
    if hasattr(coeff, "as_tuple"):
        return coeff.as_tuple()
    alpha, beta, gamma = coeff
    return float(alpha), float(beta), float(gamma)


def _a_of_F(f, coeff):
    """Chaos expansion of a(F) = alpha F^2 + beta F + gamma for F = I_n(f)."""
    alpha, beta, gamma = _as_coeff_tuple(coeff)
    F = ChaosVector.from_kernel(f)
    out = ChaosVector.constant(f.dim, gamma)
    if beta:
        out = out + beta * F
    if alpha:
        out = out + alpha * chaos_product(F, F)
    return out


def stein_residual_l2(f, coeff):
    """E[(a(F)/2 - n^{-1} ||DF||^2)^2] by the level decomposition.

    With a(F) = sum_k I_k(g_k), the even levels k <= 2n-2 carry the
    cancellation against n (n-1-k/2)! C(n-1,k/2)^2 f ~x_{n-k/2} f and the rest
    contribute (1/4) E[I_k(g_k)^2]; each level enters with its chaos-isometric
    weight k! on the symmetrized kernel.
    """
    n = f.order
    if n == 0:
        raise ValueError("needs a kernel of order >= 1")
    aF = _a_of_F(f, coeff)
    total = 0.0
    levels = set(aF.components) | set(range(0, 2 * n - 1, 2))
    for k in sorted(levels):
        gk = aF.level(k)
        if k % 2 == 0 and k <= 2 * n - 2:
            coefficient = (
                n * math.factorial(n - 1 - k // 2) * math.comb(n - 1, k // 2) ** 2
            )
            bracket = 0.5 * gk - coefficient * contract(f, f, n - k // 2).symmetrized()
            total += math.factorial(k) * bracket.norm_sq()
        else:
            total += 0.25 * math.factorial(k) * gk.norm_sq()
    return total


def stein_residual_l2_direct(f, coeff):
    """Same quantity by direct chaos subtraction: R = a(F)/2 - n^{-1}<DF, DF>,
    then E[R^2] by the isometry."""
    n = f.order
    R = 0.5 * _a_of_F(f, coeff) - (1.0 / n) * malliavin_inner(f, f)
    return expect_product(R, R)


def _pathwise_parts(f, coeff, x):
    """(a(F)(x)/2, n^{-1}||DF||^2(x)) evaluated through derivative slices."""
    n = f.order
    alpha, beta, gamma = _as_coeff_tuple(coeff)
    v = eval_multiple_integral(f, x)
    aval = alpha * v * v + beta * v + gamma
    df2 = np.zeros(x.shape[0])
    for s in derivative_slices(f):
        sv = eval_multiple_integral(s, x)
        df2 += sv * sv
    df2 *= n * n
    return 0.5 * aval, df2 / n


def stein_residual_l2_mc(f, coeff, samples, seed):
    """Monte Carlo route (slice-based pathwise evaluation): (value, stderr)."""
    x = sample_gaussian(f.dim, samples, seed)
    half_a, k = _pathwise_parts(f, coeff, x)
    r2 = (half_a - k) ** 2
    return float(r2.mean()), float(r2.std(ddof=1) / math.sqrt(len(r2)))


def stein_discrepancy_l1_mc(f, coeff, samples, seed):
    """Monte Carlo E|a(F)/2 - n^{-1}||DF||^2|: (value, stderr).

    This is the raw expectation entering the distance bound; no constant is
    asserted, the number is reported as-is.
    """
    x = sample_gaussian(f.dim, samples, seed)
    half_a, k = _pathwise_parts(f, coeff, x)
    r = np.abs(half_a - k)
    return float(r.mean()), float(r.std(ddof=1) / math.sqrt(len(r)))


def prop24_gap(f, coeff):
    """|(1/4) E[a(F)^2] - n^{-2} E[||DF||^4]|, all in exact chaos arithmetic."""
    n = f.order
    aF = _a_of_F(f, coeff)
    m = malliavin_inner(f, f)
    ea2 = expect_product(aF, aF)
    edf4 = expect_product(m, m)
    return abs(0.25 * ea2 - edf4 / n**2)


def prop24_gap_mc(f, coeff, samples, seed):
    """Monte Carlo version of ``prop24_gap``: (value, stderr of the difference)."""
    x = sample_gaussian(f.dim, samples, seed)
    half_a, k = _pathwise_parts(f, coeff, x)
    diff = half_a**2 - k**2
    return abs(float(diff.mean())), float(diff.std(ddof=1) / math.sqrt(len(diff)))


def lemma_l2_combination(f, coeff):
    """E[F^4 - (3/2) a(F) F^2], exact: vanishes at the Gamma fixed point."""
    alpha, beta, gamma = _as_coeff_tuple(coeff)
    ef2 = f.scaled_norm_sq()
    ef3 = moment3(f)
    ef4 = moment4(f)
    return (1.0 - 1.5 * alpha) * ef4 - 1.5 * beta * ef3 - 1.5 * gamma * ef2


def gamma_kernel_gap(f, lam):
    """|| (2/lam) c_n f - f ~x_{n/2} f ||: zero iff f is a Gamma fixed point."""
    n = f.order
    g = (2.0 / lam) * c_n(n) * f - contract(f, f, n // 2).symmetrized()
    return g.norm()


def lemma_l11_gap(f, coeff):
    """|<f, f ~x_{n/2} f> - (beta/(1-alpha)) c_n ||f||^2| for even order."""
    alpha, beta, _ = _as_coeff_tuple(coeff)
    if alpha == 1.0:
        raise ValueError("alpha = 1 is excluded")
    half = contract(f, f, f.order // 2).symmetrized()
    return abs(f.inner(half) - beta / (1.0 - alpha) * c_n(f.order) * f.norm_sq())


# --- kernel families and the report -------------------------------------------

@dataclass(frozen=True)
class KernelFamily:
    """A sequence of kernels indexed by m, all of one fixed order."""

    name: str
    order: int
    member: object = field(repr=False)

    def __call__(self, m):
        k = self.member(m)
        if k.order != self.order:
            raise ValueError("family produced a kernel of the wrong order")
        return k


def gaussian_clt_family():
    """f_m = (2m)^{-1/2} sum_{i<m} e_i^{x2}: E[F_m^2] = 1, fourth moment 3 + 12/m."""
    def member(m):
        if m < 1:
            raise ValueError("family index m must be >= 1")
        entries = {(i, i): 1.0 / math.sqrt(2.0 * m) for i in range(m)}
        return SymmetricKernel(m, 2, entries)

    return KernelFamily("gaussian_clt", 2, member)


def gamma_fixed_family(k):
    """f = sum_{i<k} e_i^{x2}, constant in m: F ~ centered Gamma(k/2, 1/2)."""
    if k < 1:
        raise ValueError("gamma_fixed needs k >= 1")

    def member(m):
        return SymmetricKernel(k, 2, {(i, i): 1.0 for i in range(k)})

    return KernelFamily("gamma_fixed", 2, member)


BUILTIN_FAMILIES = {
    "gaussian_clt": lambda k=None: gaussian_clt_family(),
    "gamma_fixed": lambda k: gamma_fixed_family(k),
}


@dataclass(frozen=True)
class DiagnosticsReport:
    """Everything ``run_family_diagnostics`` measured, plus trend ratios."""

    family: str
    order: int
    target_name: str
    target_params: dict
    coeff: tuple
    members: list
    verdict: ClassifierVerdict
    trends: dict


def _ratio_trend(values):
    out = []
    for a, b in zip(values, values[1:]):
        out.append(float("nan") if b == 0.0 else a / b)
    return out


def run_family_diagnostics(family, ms, target, mc_samples=0, seed=None):
    """Evaluate the full diagnostic battery for family members m in ms.

    ``target`` must carry a polynomial coefficient.  When ``mc_samples`` > 0 a
    seed is required and every chaos-route quantity gains a Monte Carlo twin
    (value, stderr) computed from slice-based pathwise evaluation.
    """
    coeff = target.coeff
    try:
        alpha, beta, gamma = coeff.as_tuple()
    except ValueError:
        raise ValueError(
            "family diagnostics need a target with a polynomial diffusion"
            " coefficient"
        ) from None
    if mc_samples and seed is None:
        raise ValueError("Monte Carlo diagnostics need a seed")
    lam_match = None
    if target.name == "gamma":
        lam_match = target.params["lam"]
    elif beta != 0.0:
        lam_match = 2.0 / beta  # the only rate a Gamma limit could have
    members = []
    for j, m in enumerate(ms):
        f = family(m)
        n = f.order
        rec = {
            "m": int(m),
            "dim": f.dim,
            "ef2": f.scaled_norm_sq(),
            "ef3": moment3(f),
            "ef4": moment4(f),
            "contraction_norms": {
                p: math.sqrt(contract(f, f, p).symmetrized().norm_sq())
                for p in range(1, n)
            },
            "stein_residual_l2_chaos": stein_residual_l2(f, coeff),
            "prop24_gap_chaos": prop24_gap(f, coeff),
            "lemma_l2_combination": lemma_l2_combination(f, coeff),
        }
        if n % 2 == 0:
            if lam_match is not None:
                rec["gamma_kernel_gap"] = gamma_kernel_gap(f, lam_match)
            if alpha != 1.0:
                rec["lemma_l11_gap"] = lemma_l11_gap(f, coeff)
        if mc_samples:
            sub = int(seed) + 1000003 * j
            rec["stein_residual_l2_mc"] = stein_residual_l2_mc(
                f, coeff, mc_samples, sub
            )
            rec["prop24_gap_mc"] = prop24_gap_mc(f, coeff, mc_samples, sub)
            rec["stein_discrepancy_l1"] = stein_discrepancy_l1_mc(
                f, coeff, mc_samples, sub
            )
        members.append(rec)
    verdict = classifier(
        alpha, beta, gamma,
        all_even_moments_finite=not math.isfinite(target.moment_bound),
    )
    trends = {}
    if len(members) >= 2:
        trends["stein_residual_l2_chaos"] = _ratio_trend(
            [r["stein_residual_l2_chaos"] for r in members]
        )
        trends["prop24_gap_chaos"] = _ratio_trend(
            [r["prop24_gap_chaos"] for r in members]
        )
        trends["ef4_excess"] = _ratio_trend(
            [r["ef4"] - 3.0 * r["ef2"] ** 2 for r in members]
        )
        trends["contraction_norm_sq_p1"] = _ratio_trend(
            [r["contraction_norms"][1] ** 2 for r in members]
        ) if family.order >= 2 else []
    return DiagnosticsReport(
        family=family.name,
        order=family.order,
        target_name=target.name,
        target_params=dict(target.params),
        coeff=(alpha, beta, gamma),
        members=members,
        verdict=verdict,
        trends=trends,
    )
