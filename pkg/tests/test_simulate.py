"""Euler--Maruyama sampling, distances, and empirical Stein checks."""
import math

import numpy as np
import pytest

from chaoslimits import (
    EmpiricalDistribution,
    SimConfig,
    beta_target,
    gamma_target,
    ks_distance,
    normal_target,
    simulate,
    stein_dictionary_test,
    stein_residual_empirical,
    uniform_centered_target,
    wasserstein1_distance,
)

FAST = SimConfig(dt=2e-3, burn_in=2_000, samples=2_000, thinning=5, seed=1)


def test_simconfig_validation():
    with pytest.raises(ValueError, match="dt"):
        SimConfig(dt=0.0, seed=1)
    with pytest.raises(ValueError, match="burn_in"):
        SimConfig(burn_in=-1, seed=1)
    with pytest.raises(ValueError, match="samples"):
        SimConfig(samples=1, seed=1)
    with pytest.raises(ValueError, match="thinning"):
        SimConfig(thinning=0, seed=1)
    with pytest.raises(ValueError, match="seed"):
        SimConfig()
    with pytest.raises(ValueError, match="boundary_epsilon"):
        SimConfig(seed=1, boundary_epsilon=0.0)


def test_empirical_distribution_sorts_and_counts():
    e = EmpiricalDistribution(np.array([3.0, 1.0, 2.0]))
    assert np.array_equal(e.values, [1.0, 2.0, 3.0])
    assert e.count == 3
    assert e.quantile(0.5) == 2.0
    with pytest.raises(ValueError):
        EmpiricalDistribution(np.array([1.0]))


def test_simulate_is_deterministic():
    t = normal_target(1.0)
    a = simulate(t, FAST)
    b = simulate(t, FAST)
    assert np.array_equal(a.values, b.values)
    c = simulate(t, SimConfig(dt=2e-3, burn_in=2_000, samples=2_000,
                              thinning=5, seed=2))
    assert not np.array_equal(a.values, c.values)


def test_simulate_meta_echo():
    t = gamma_target(2.0, 1.0)
    e = simulate(t, FAST)
    assert e.meta["target"] == "gamma"
    assert e.meta["params"] == {"a": 2.0, "lam": 1.0}
    assert e.meta["dt"] == FAST.dt
    assert e.meta["seed"] == FAST.seed
    assert e.count == FAST.samples


def test_simulate_respects_bounded_support():
    for t in (uniform_centered_target(), beta_target(0.5, 0.5)):
        e = simulate(t, FAST)
        l, u = t.support
        assert e.values.min() > l
        assert e.values.max() < u


def test_simulate_roughly_calibrated():
    # a short chain is biased but must still land in the right ballpark
    t = normal_target(1.0)
    e = simulate(t, SimConfig(dt=1e-3, burn_in=20_000, samples=20_000,
                              thinning=20, seed=7))
    assert abs(e.mean()) < 0.1
    assert abs(e.var() - 1.0) < 0.15
    assert ks_distance(e, t) < 0.05


def test_simulate_dt_halving_is_stable():
    # same physical burn-in/spacing at two step sizes: both calibrated
    t = gamma_target(2.0, 1.0)
    coarse = simulate(t, SimConfig(dt=2e-3, burn_in=5_000, samples=5_000,
                                   thinning=100, seed=3))
    fine = simulate(t, SimConfig(dt=1e-3, burn_in=10_000, samples=5_000,
                                 thinning=200, seed=3))
    assert ks_distance(coarse, t) < 0.1
    assert ks_distance(fine, t) < 0.1
    assert abs(coarse.mean() - fine.mean()) < 0.2


def test_simulate_overflow_raises():
    t = normal_target(1.0)
    with pytest.raises(RuntimeError, match="dt too large"):
        simulate(t, SimConfig(dt=1e9, burn_in=10, samples=10, seed=1))


def test_clamp_fraction_reporting():
    # a huge boundary inset forces constant clamping on a bounded target
    t = uniform_centered_target()
    e = simulate(t, SimConfig(dt=2e-3, burn_in=500, samples=500, thinning=2,
                              seed=5, boundary_epsilon=0.2))
    assert e.clamp_fraction > 0.0
    assert e.clamping_flagged
    calm = simulate(t, FAST)
    assert not calm.clamping_flagged


# --- distances ---------------------------------------------------------------------------

def test_ks_distance_exact_samples_dkw():
    t = gamma_target(2.0, 1.0)
    e = EmpiricalDistribution(t.sample_exact(4000, seed=11))
    # DKW 99% band
    assert ks_distance(e, t) < 1.63 / math.sqrt(4000)


def test_ks_distance_detects_wrong_target():
    t = gamma_target(2.0, 1.0)
    e = EmpiricalDistribution(t.sample_exact(4000, seed=11))
    assert ks_distance(e, normal_target(1.0)) > 0.1


def test_wasserstein_identical_and_shifted():
    x = np.random.default_rng(13).standard_normal(500)
    e = EmpiricalDistribution(x)
    assert wasserstein1_distance(e, e) == 0.0
    shifted = EmpiricalDistribution(x + 0.75)
    assert math.isclose(wasserstein1_distance(e, shifted), 0.75, rel_tol=1e-12)


def test_wasserstein_two_samples_same_law():
    t = normal_target(1.0)
    a = EmpiricalDistribution(t.sample_exact(4000, seed=1))
    b = EmpiricalDistribution(t.sample_exact(6000, seed=2))  # unequal counts ok
    assert wasserstein1_distance(a, b) < 0.05


# --- empirical Stein checks ------------------------------------------------------------------

def test_stein_residual_empirical_on_exact_samples():
    t = gamma_target(2.0, 1.0)
    e = EmpiricalDistribution(t.sample_exact(20_000, seed=17))
    for h, dh in ((lambda y: y, lambda y: np.ones_like(y)),
                  (np.sin, np.cos)):
        mean, se = stein_residual_empirical(e, t, h, dh)
        assert se > 0
        assert abs(mean) < 4 * se


def test_stein_residual_empirical_fd_fallback():
    t = normal_target(1.0)
    e = EmpiricalDistribution(t.sample_exact(2_000, seed=19))
    with_dh = stein_residual_empirical(e, t, np.sin, np.cos)
    without = stein_residual_empirical(e, t, np.sin)
    assert math.isclose(with_dh[0], without[0], rel_tol=1e-6, abs_tol=1e-9)


def test_stein_residual_empirical_rejects_wrong_law():
    t = gamma_target(2.0, 1.0)
    wrong = normal_target(1.0)
    e = EmpiricalDistribution(t.sample_exact(20_000, seed=23))
    mean, se = stein_residual_empirical(e, wrong, lambda y: y,
                                        lambda y: np.ones_like(y))
    assert abs(mean) > 10 * se


def test_stein_dictionary_test_pass_and_fail():
    t = normal_target(1.0)
    e = EmpiricalDistribution(t.sample_exact(20_000, seed=29))
    results, ok = stein_dictionary_test(e, t)
    assert ok
    assert set(results) == {"x", "x^2", "x^3", "sin"}
    for mean, se, z in results.values():
        assert abs(z) < 5.0 and z == pytest.approx(abs(mean) / se)
    _, bad = stein_dictionary_test(e, gamma_target(2.0, 1.0))
    assert not bad
