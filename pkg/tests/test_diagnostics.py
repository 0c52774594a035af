"""Moment diagnostics, the coefficient classifier, and kernel families."""
import math

import numpy as np
import pytest

from chaoslimits import (
    BUILTIN_FAMILIES,
    SymmetricKernel,
    c_n,
    classifier,
    classifier_c0,
    classifier_delta,
    contract,
    ec_roots,
    gamma_fixed_family,
    gamma_kernel_gap,
    gamma_target,
    gaussian_clt_family,
    lemma_l2_combination,
    lemma_l11_gap,
    moment3,
    moment4,
    named_target,
    normal_target,
    prop24_gap,
    prop24_gap_mc,
    random_kernel,
    run_family_diagnostics,
    stein_discrepancy_l1_mc,
    stein_residual_l2,
    stein_residual_l2_direct,
    stein_residual_l2_mc,
    student_target,
    target_from_density_grid,
    uniform_centered_target,
    wick_moment,
)

from oracles import gauss_hermite_expectation


# --- combinatorial constants -----------------------------------------------------------

def test_c_n_values():
    assert c_n(2) == 0.25
    assert math.isclose(c_n(4), 1.0 / 72.0, rel_tol=1e-15)
    assert math.isclose(c_n(6), math.factorial(3) ** 3 / math.factorial(6) ** 2,
                        rel_tol=1e-15)


def test_c_n_guards():
    with pytest.raises(ValueError):
        c_n(3)
    with pytest.raises(ValueError):
        c_n(0)


def test_moment4_half_contraction_weight():
    # the p = n/2 term's coefficient is (3/2) c_n^{-2} n!
    for n in (2, 4):
        p = n // 2
        coef = 3 * n * (
            math.factorial(p - 1) * math.comb(n - 1, p - 1) ** 2
            * math.factorial(p) * math.comb(n, p) ** 2
            * math.factorial(2 * n - 2 * p)
        )
        assert math.isclose(coef, 1.5 * c_n(n) ** -2 * math.factorial(n),
                            rel_tol=1e-12)
    # frozen: 48 at n = 2, 186624 at n = 4
    assert 3 * 2 * 1 * 1 * 1 * 4 * 2 == 48
    assert 3 * 4 * 1 * 9 * 2 * 36 * 24 == 186624


# --- third and fourth moments ------------------------------------------------------------

def test_moments_match_wick_sweep():
    rng = np.random.default_rng(5)
    for _ in range(12):
        n = int(rng.choice([2, 4]))
        d = int(rng.integers(2, 5))
        f = random_kernel(rng, d, n, nnz=5)
        assert math.isclose(moment3(f), wick_moment([f], [3]),
                            rel_tol=1e-10, abs_tol=1e-12)
        assert math.isclose(moment4(f), wick_moment([f], [4]),
                            rel_tol=1e-10, abs_tol=1e-12)


def test_moments_odd_order_and_edge_cases():
    rng = np.random.default_rng(6)
    f = random_kernel(rng, 3, 3, nnz=4)
    assert moment3(f) == 0.0
    g = SymmetricKernel(1, 0, {(): 2.0})
    assert moment3(g) == 8.0
    assert moment4(g) == 16.0


def test_moment4_matches_quadrature_small():
    f = SymmetricKernel(2, 2, {(0, 0): 0.7, (0, 1): -0.3, (1, 1): 0.4})
    def F(x):
        x0, x1 = x[..., 0], x[..., 1]
        return 0.7 * (x0 * x0 - 1) + 2 * (-0.3) * x0 * x1 + 0.4 * (x1 * x1 - 1)
    want3 = gauss_hermite_expectation(lambda x: F(x) ** 3, 2, degree=9)
    want4 = gauss_hermite_expectation(lambda x: F(x) ** 4, 2, degree=9)
    assert math.isclose(moment3(f), want3, rel_tol=1e-10)
    assert math.isclose(moment4(f), want4, rel_tol=1e-10)


# --- classifier scalars -------------------------------------------------------------------

def test_classifier_scalars_zero_iff_alpha_zero():
    rng = np.random.default_rng(7)
    for _ in range(200):
        beta = float(rng.uniform(-2, 2))
        gamma = float(rng.uniform(0.1, 3))
        assert classifier_c0(0.0, beta, gamma) == 0.0
        assert classifier_delta(0.0, beta, gamma) == 0.0
        alpha = float(rng.uniform(-1.5, 0.6))
        if alpha == 0.0 or abs(beta) < 1e-12:
            continue
        assert classifier_delta(alpha, beta, gamma) != 0.0


def test_classifier_frozen_values():
    # uniform on (-1/2, 1/2): C0 = 1/10
    al, be, ga = uniform_centered_target().coeff.as_tuple()
    assert math.isclose(classifier_c0(al, be, ga), 0.1, rel_tol=1e-14)
    # student t(5): C0 = -10
    al, be, ga = student_target(5.0).coeff.as_tuple()
    assert math.isclose(classifier_c0(al, be, ga), -10.0, rel_tol=1e-14)


def test_classifier_scalar_guards():
    for bad in (1.0, 2.0, 2.0 / 3.0):
        with pytest.raises(ValueError):
            classifier_c0(bad, 1.0, 1.0)
        with pytest.raises(ValueError):
            classifier_delta(bad, 1.0, 1.0)
        with pytest.raises(ValueError):
            ec_roots(bad, 1.0, 1.0)
    with pytest.raises(ValueError):
        ec_roots(0.5, 0.0, 1.0)


def test_ec_roots_solve_the_quadratic():
    rng = np.random.default_rng(8)
    checked = 0
    for _ in range(300):
        alpha = float(rng.uniform(-1.5, 0.6))
        beta = float(rng.uniform(-2, 2))
        gamma = float(rng.uniform(0.1, 3))
        if alpha in (0.0,) or abs(beta) < 1e-6:
            continue
        disc, roots = ec_roots(alpha, beta, gamma)
        c0 = classifier_c0(alpha, beta, gamma)
        for c in roots:
            val = (3 * beta**2 * c * c - 12 * beta**2 / (1 - alpha) * c
                   - (8 * c0 - 12 * beta**2 / (1 - alpha)))
            assert abs(val) < 1e-8 * max(1.0, abs(8 * c0))
        # sign agreement with the reported Delta whenever EX^2 > 0
        if gamma / (2 - alpha) > 0:
            delta = classifier_delta(alpha, beta, gamma)
            assert (disc > 0) == (delta > 0) or (disc == delta == 0.0)
        checked += 1
    assert checked > 200


def test_ec_roots_gamma_coefficients_double_root():
    # (0, 2, 2) -- the Gamma(1, 1) coefficients -- give the double root c = 2
    disc, roots = ec_roots(0.0, 2.0, 2.0)
    assert abs(disc) < 1e-12
    assert len(roots) == 2
    assert math.isclose(roots[0], 2.0, rel_tol=1e-12)
    assert math.isclose(roots[1], 2.0, rel_tol=1e-12)


# --- classifier verdicts --------------------------------------------------------------------

def test_classifier_named_target_verdicts():
    cases = {
        ("normal", (("gamma", 1.0),)): "GaussianOnly",
        ("student", (("nu", 5.0),)): "GaussianOnly",
        ("uniform", ()): "GaussianOnly",
        ("beta", (("a", 2.0), ("b", 2.0))): "GaussianOnly",
        ("gamma", (("a", 2.0), ("lam", 1.0))): "GammaOnly",
        ("pareto", (("nu", 5.0),)): "OutsideHypotheses",
        ("f", (("a", 6.0), ("b", 10.0))): "OutsideHypotheses",
        ("inverse_gamma", (("delta", 3.0), ("lam", 5.0))): "OutsideHypotheses",
    }
    for (name, params), want in cases.items():
        t = named_target(name, **dict(params))
        al, be, ga = t.coeff.as_tuple()
        v = classifier(al, be, ga,
                       all_even_moments_finite=not math.isfinite(t.moment_bound))
        assert v.kind == want, (name, v)


def test_classifier_pareto3_alpha_excluded():
    # Pareto(3) has alpha = 1 exactly: excluded-parameter branch
    t = named_target("pareto", nu=3.0)
    al, be, ga = t.coeff.as_tuple()
    assert al == 1.0
    v = classifier(al, be, ga)
    assert v.kind == "OutsideHypotheses"
    assert "excluded" in v.reason


def test_classifier_gamma_branch_parameters():
    v = classifier(0.0, 2.0, 2.0)
    assert v.kind == "GammaOnly"
    lam, a = v.gamma_params
    assert math.isclose(lam, 1.0) and math.isclose(a, 1.0)
    # negative beta: reflected Gamma
    v = classifier(0.0, -2.0, 2.0)
    assert v.kind == "GammaOnly"
    assert "reflected" in v.reason
    assert v.gamma_params[0] == -1.0


def test_classifier_gaussian_branch_flags_heavy_tails():
    al, be, ga = student_target(5.0).coeff.as_tuple()
    v = classifier(al, be, ga, all_even_moments_finite=False)
    assert v.kind == "GaussianOnly"
    assert v.c0_sign_argument_applies is False
    v2 = classifier(0.0, 0.0, 1.0)
    assert v2.c0_sign_argument_applies is True


def test_classifier_inconsistent_branches():
    assert classifier(-1.0, 1.0, 1.0).kind == "Inconsistent"
    assert classifier(0.9, 1.0, 1.0).kind == "Inconsistent"
    # forced EX^2 <= 0
    assert classifier(0.0, 1.0, -1.0).kind == "Inconsistent"


def test_classifier_middle_band_is_outside():
    v = classifier(0.3, 1.0, 1.0)
    assert v.kind == "OutsideHypotheses"
    assert v.ec_discriminant < 0.0
    assert v.roots == ()


# --- L^2 residuals and gaps -----------------------------------------------------------------

def test_residual_routes_agree_random_sweep():
    rng = np.random.default_rng(9)
    for _ in range(15):
        n = int(rng.choice([2, 3, 4]))
        d = int(rng.integers(2, 5))
        f = random_kernel(rng, d, n, nnz=4)
        coeff = (float(rng.uniform(-0.5, 0.5)), float(rng.uniform(-1, 1)),
                 float(rng.uniform(0.2, 2)))
        a = stein_residual_l2(f, coeff)
        b = stein_residual_l2_direct(f, coeff)
        assert math.isclose(a, b, rel_tol=1e-10, abs_tol=1e-12)


def test_residual_mc_tracks_exact():
    rng = np.random.default_rng(10)
    f = random_kernel(rng, 3, 2, nnz=4)
    coeff = (0.0, 0.0, 2.0)
    exact = stein_residual_l2(f, coeff)
    est, se = stein_residual_l2_mc(f, coeff, 40000, seed=21)
    assert se > 0
    assert abs(est - exact) < 5 * se


def test_prop24_gap_mc_tracks_exact():
    rng = np.random.default_rng(11)
    f = random_kernel(rng, 3, 2, nnz=4)
    coeff = (0.0, 1.0, 1.0)
    exact = prop24_gap(f, coeff)
    est, se = prop24_gap_mc(f, coeff, 40000, seed=22)
    assert abs(est - exact) < 5 * se + 1e-12


def test_stein_discrepancy_l1_decreases_for_clt_family():
    fam = gaussian_clt_family()
    coeff = (0.0, 0.0, 2.0)
    small, _ = stein_discrepancy_l1_mc(fam(2), coeff, 30000, seed=23)
    large, _ = stein_discrepancy_l1_mc(fam(32), coeff, 30000, seed=23)
    assert large < small


def test_lemma_l2_combination_frozen_value():
    # F = x^2 - 1 against the pure-Gaussian coefficient (0, 0, 2):
    # E[F^4] - (3/2) * 2 * E[F^2] = 60 - 6 = 54
    f = SymmetricKernel(1, 2, {(0, 0): 1.0})
    assert math.isclose(lemma_l2_combination(f, (0.0, 0.0, 2.0)), 54.0,
                        rel_tol=1e-14)


# --- the Gaussian CLT family: exact 1/m laws ---------------------------------------------------

def test_gaussian_clt_family_exact_laws():
    fam = gaussian_clt_family()
    coeff = (0.0, 0.0, 2.0)
    for m in (1, 2, 4, 8, 16):
        f = fam(m)
        assert f.dim == m and f.order == 2
        assert math.isclose(f.scaled_norm_sq(), 1.0, rel_tol=1e-14)
        assert moment3(f) != 0.0 or m > 0  # third moment is 8/(2m)^{3/2} * m
        assert math.isclose(moment4(f), 3.0 + 12.0 / m, rel_tol=1e-13)
        half = contract(f, f, 1).symmetrized()
        assert math.isclose(half.norm_sq(), 1.0 / (4.0 * m), rel_tol=1e-13)
        assert math.isclose(stein_residual_l2(f, coeff), 2.0 / m, rel_tol=1e-12)
        assert math.isclose(prop24_gap(f, coeff), 2.0 / m, rel_tol=1e-12)


def test_gaussian_clt_family_guards():
    fam = gaussian_clt_family()
    with pytest.raises(ValueError):
        fam(0)


# --- the Gamma fixed point ----------------------------------------------------------------------

def test_gamma_fixed_family_is_a_fixed_point():
    for k in (1, 2, 3):
        f = gamma_fixed_family(k)(1)
        t = gamma_target(k / 2.0, 0.5)
        coeff = t.coeff.as_tuple()
        assert coeff == (0.0, 4.0, 4.0 * k)
        assert stein_residual_l2(f, coeff) == 0.0
        assert stein_residual_l2_direct(f, coeff) == 0.0
        assert lemma_l2_combination(f, coeff) == pytest.approx(0.0, abs=1e-10)
        assert gamma_kernel_gap(f, 0.5) == 0.0
        assert lemma_l11_gap(f, coeff) == 0.0
        assert math.isclose(moment3(f), 8.0 * k, rel_tol=1e-14)


def test_gamma_fixed_family_off_coefficients_not_zero():
    # the same kernel against Gamma(1, 1) coefficients is NOT a fixed point
    f = gamma_fixed_family(1)(1)
    res = stein_residual_l2(f, (0.0, 2.0, 2.0))
    assert math.isclose(res, 3.0, rel_tol=1e-12)
    assert lemma_l11_gap(f, (0.0, 2.0, 2.0)) == 0.5


def test_gamma_kernel_gap_nonzero_for_clt_member():
    f = gaussian_clt_family()(4)
    assert gamma_kernel_gap(f, 1.0) > 0.1


# --- the family report ----------------------------------------------------------------------------

def test_run_family_diagnostics_clt_report():
    report = run_family_diagnostics(
        gaussian_clt_family(), [2, 4, 8, 16], normal_target(1.0)
    )
    assert report.family == "gaussian_clt"
    assert report.order == 2
    assert report.target_name == "normal"
    assert report.coeff == (0.0, 0.0, 2.0)
    assert report.verdict.kind == "GaussianOnly"
    assert len(report.members) == 4
    for rec in report.members:
        assert set(rec) >= {"m", "dim", "ef2", "ef3", "ef4",
                            "contraction_norms", "stein_residual_l2_chaos",
                            "prop24_gap_chaos", "lemma_l2_combination",
                            "lemma_l11_gap"}
        assert "gamma_kernel_gap" not in rec  # no Gamma rate to match
    # halving laws: every tracked quantity drops by 2x per doubling of m
    for key in ("stein_residual_l2_chaos", "prop24_gap_chaos",
                "ef4_excess", "contraction_norm_sq_p1"):
        for r in report.trends[key]:
            assert math.isclose(r, 2.0, rel_tol=1e-10), (key, report.trends)


def test_run_family_diagnostics_gamma_report():
    t = gamma_target(0.5, 0.5)
    report = run_family_diagnostics(gamma_fixed_family(1), [1, 2], t)
    assert report.verdict.kind == "GammaOnly"
    for rec in report.members:
        assert rec["gamma_kernel_gap"] == 0.0
        assert rec["stein_residual_l2_chaos"] == 0.0


def test_run_family_diagnostics_mc_twins():
    report = run_family_diagnostics(
        gaussian_clt_family(), [2, 4], normal_target(1.0),
        mc_samples=20000, seed=31,
    )
    for rec in report.members:
        est, se = rec["stein_residual_l2_mc"]
        assert abs(est - rec["stein_residual_l2_chaos"]) < 5 * se
        assert "prop24_gap_mc" in rec and "stein_discrepancy_l1" in rec


def test_run_family_diagnostics_guards():
    with pytest.raises(ValueError, match="seed"):
        run_family_diagnostics(gaussian_clt_family(), [2], normal_target(1.0),
                               mc_samples=100)
    xs = np.linspace(0.1, 5.0, 50)
    custom = target_from_density_grid(xs, np.exp(-xs), (0.1, 5.0))
    with pytest.raises(ValueError, match="polynomial"):
        run_family_diagnostics(gaussian_clt_family(), [2], custom)


def test_builtin_families_registry():
    assert BUILTIN_FAMILIES["gaussian_clt"]()(3).dim == 3
    assert BUILTIN_FAMILIES["gamma_fixed"](2)(7).dim == 2
    with pytest.raises(ValueError):
        gamma_fixed_family(0)
