"""Closed forms against a 60-digit mpmath re-evaluation and Monte Carlo."""

import math

import mpmath as mp
import numpy as np
import pytest

from cspath import lambda_star, lambda_star_power, theory

mp.mp.dps = 60

REL = 1e-12


# -- independent high-precision re-evaluations -------------------------

def mp_min_length(n, c0):
    return mp.log(n) ** 2 / (4 * mp.mpf(c0) * n)


def mp_min_length_power(n, c0, g, exponent):
    g = mp.mpf(g)
    return g * mp.log(n) ** 2 / (4 * mp.gamma(1 / g + 1) ** mp.mpf(exponent)
                                 * mp.mpf(c0) * mp.mpf(n) ** g)


def mp_lambda_star_power(n, c0, g):
    g = mp.mpf(g)
    return mp.log(n) ** 2 / (4 * mp.mpf(c0) ** 2
                             * mp.gamma(1 / g + 1) ** (2 * g) * mp.mpf(n) ** g)


def mp_sum_product_bound(k, t):
    t = mp.mpf(t)
    return (t**k / mp.factorial(k) ** 2) * (
        k * mp.log(k * k / t) + 2 * mp.factorial(k) / mp.mpf(k) ** k)


def mp_sum_product_bound_power(k, t, g):
    t, g = mp.mpf(t), mp.mpf(g)
    kg = k / g
    lead = t**kg * mp.gamma(1 / g + 1) ** (2 * k) / mp.gamma(kg + 1) ** 2
    bracket = kg * mp.log(k * k / t) + 2 * mp.gamma(kg + 1) / (
        mp.mpf(k) ** k * mp.gamma(1 / g + 1) ** k)
    return lead * bracket


def mp_power_sum_bound(k, g, u):
    g, u = mp.mpf(g), mp.mpf(u)
    return u ** (k / g) * mp.gamma(1 / g + 1) ** k / mp.gamma(k / g + 1)


def mp_cheap_term(n, beta, h):
    beta = mp.mpf(beta)
    return (mp.mpf(n) ** (h - 1) / mp.factorial(h) ** 2
            * (beta * mp.log(n) ** 2 / n) ** h
            * (h * mp.log(h * h * n / (beta * mp.log(n) ** 2))
               + 2 * mp.factorial(h) / mp.mpf(h) ** h))


def _close(a, b, rel=REL):
    assert a == pytest.approx(float(b), rel=rel), (a, float(b))


# -- frozen example values (all computed with the oracle above) --------

def test_min_length_example():
    _close(theory.expected_min_length(1000, 0.2), 0.059646353742881978)


def test_hops_example():
    _close(theory.expected_hops(1000), 3.4538776394910685)


def test_min_length_scale_free_in_budget():
    a = theory.expected_min_length(500, 0.1) * 0.1
    b = theory.expected_min_length(500, 0.33) * 0.33
    _close(a, b)


def test_hops_power_example():
    _close(theory.expected_hops_power(10**4, 0.5), 2.3025850929940457)


def test_min_length_power_examples():
    _close(theory.expected_min_length_power(10**4, 0.1, 0.5,
                                            theory.VARIANT_GAMMA2GAMMA),
           0.5301898110478398)
    _close(theory.expected_min_length_power(10**4, 0.1, 0.5,
                                            theory.VARIANT_GAMMA2),
           0.2650949055239199)


def test_budget_window_examples():
    lo, hi = theory.budget_window(1000)
    _close(lo, 0.033741072963714765)
    _close(hi, 0.35355339059327376)
    # upper end does not depend on n, lower end scales as log^2(n)/n
    assert theory.budget_window(10**6)[1] == hi
    _close(lo * 1000 / math.log(1000) ** 2, 1 / math.sqrt(2))


def test_sum_product_bound_examples():
    _close(theory.sum_product_tail_bound(1, 0.1), 0.43025850929940457)
    _close(theory.sum_product_tail_bound(2, 1.0), 0.94314718055994531)


def test_sum_product_bound_dominates_exact_two_uniform_cdf():
    # P(U1*U2 <= t) = t*(1 - log t): the exact CDF of a product of two
    # uniforms, an independent oracle for the k=1 bound
    for t in (0.05, 0.1, 0.3, 0.7):
        exact = t * (1 - math.log(t))
        assert theory.sum_product_tail_bound(1, t) >= exact
    _close(0.1 * (1 - math.log(0.1)), 0.33025850929940457)


def test_sum_product_bound_domain():
    with pytest.raises(ValueError):
        theory.sum_product_tail_bound(1, 1.0)   # t < k^2 required
    with pytest.raises(ValueError):
        theory.sum_product_tail_bound(2, 0.0)
    with pytest.raises(ValueError):
        theory.sum_product_tail_bound_power(2, 5.0, 0.5)


def test_sum_product_bound_large_k_log_space():
    # factorial overflow territory: k up to 300 stays finite via lgamma
    for k in (50, 170, 300):
        val = theory.sum_product_tail_bound(k, k * k / 2.0)
        assert math.isfinite(val) and val >= 0.0


def test_sum_product_power_example_value():
    _close(theory.sum_product_tail_bound_power(1, 0.1, 0.5),
           0.066051701859880914)


def test_power_sum_bound_examples():
    _close(theory.power_sum_tail_bound(2, 1.0, 1.0), 0.5)
    assert theory.power_sum_tail_bound(1, 2.0, 1.0) == pytest.approx(1.0, rel=REL)
    _close(theory.power_sum_tail_bound(3, 1.0, 0.5), 0.020833333333333333)


def test_power_sum_bound_exact_for_unit_exponent_small_u():
    # gamma = 1, u <= 1: the bound IS the lower Irwin-Hall tail u^k/k!
    for k in (1, 2, 3, 5, 8):
        for u in (0.1, 0.5, 1.0):
            _close(theory.power_sum_tail_bound(k, 1.0, u),
                   u**k / math.factorial(k))


def test_power_sum_bound_monte_carlo():
    rng = np.random.default_rng(42)
    for k, g, u in [(2, 0.5, 0.5), (3, 0.5, 1.0), (2, 1.0, 0.8)]:
        s = rng.random((200_000, k)) ** g
        p = float(np.mean(s.sum(axis=1) <= u))
        se = math.sqrt(max(p * (1 - p), 1e-12) / 200_000)
        assert theory.power_sum_tail_bound(k, g, u) >= p - 3 * se


def test_sum_product_bound_monte_carlo():
    rng = np.random.default_rng(7)
    m = 200_000
    for k in (1, 2, 3):
        s = rng.random((m, k)).sum(axis=1)
        t_ = rng.random((m, k)).sum(axis=1)
        prod = s * t_
        for t in (0.1, 0.5, 1.0):
            if not t < k * k:
                continue
            p = float(np.mean(prod <= t))
            se = math.sqrt(max(p * (1 - p), 1e-12) / m)
            assert theory.sum_product_tail_bound(k, t) >= p - 3 * se


def test_sum_product_power_monte_carlo():
    rng = np.random.default_rng(11)
    m = 200_000
    k, g = 2, 0.5
    s = (rng.random((m, k)) ** g).sum(axis=1)
    t_ = (rng.random((m, k)) ** g).sum(axis=1)
    prod = s * t_
    for t in (0.5, 1.0, 2.0):
        p = float(np.mean(prod <= t))
        se = math.sqrt(max(p * (1 - p), 1e-12) / m)
        assert theory.sum_product_tail_bound_power(k, t, g) >= p - 3 * se


def test_first_moment_beta_example():
    _close(theory.first_moment_beta(1000), 0.09595134027445838)


def test_cheap_path_count_term_example():
    beta = theory.first_moment_beta(1000)
    _close(theory.cheap_path_count_term(1000, beta, 1), 0.033818673820860304)


def test_cheap_path_count_term_underflows_to_zero():
    beta = theory.first_moment_beta(1000)
    assert theory.cheap_path_count_term(1000, beta, 500) == 0.0


def test_expected_cheap_path_count_known_values():
    # frozen from the 60-digit evaluation; note the sequence is NOT
    # monotone at the 1e3 -> 1e4 step (see the acceptance suite)
    _close(theory.expected_cheap_path_count(10**3,
                                            theory.first_moment_beta(10**3)),
           0.20402525617400874, rel=1e-11)
    _close(theory.expected_cheap_path_count(10**6,
                                            theory.first_moment_beta(10**6)),
           0.20546357144494875, rel=1e-11)


def test_fpp_constant_examples():
    _close(theory.fpp_length_constant(0.5), 0.70710678118654752)
    assert theory.fpp_length_constant(1.0) == 1.0
    _close(theory.fpp_length_constant(0.25), 0.45180100180492242)


def test_min_product_bound_reduces_to_quarter_log_square():
    n = 4096
    _close(theory.min_product_bound(n), math.log(n) ** 2 / (4 * n))


def test_predict_bundles_everything():
    pred = theory.predict(1000, 0.2)
    _close(pred.L_pred, 0.059646353742881978)
    _close(pred.lambda_star, 0.29823176871440985)
    assert pred.c0_lo < 0.2 < pred.c0_hi
    assert pred.variant == theory.VARIANT_GAMMA2
    both = theory.predict(1000, 0.2, 0.5, theory.VARIANT_GAMMA2GAMMA)
    assert both.L_pred != pred.L_pred


# -- 20 random points for every closed form vs 60-digit mpmath ---------

def test_high_precision_agreement_random_points():
    rng = np.random.default_rng(2718)
    for _ in range(20):
        n = int(rng.integers(3, 10**6))
        c0 = float(rng.uniform(0.005, 2.0))
        g = float(rng.uniform(0.05, 1.0))
        k = int(rng.integers(1, 40))
        t = float(rng.uniform(1e-6, 1.0) * k * k)
        u = float(rng.uniform(0.0, 3.0))
        h = int(rng.integers(1, 30))
        beta = float(rng.uniform(0.01, 0.3))

        _close(theory.expected_min_length(n, c0), mp_min_length(n, c0))
        _close(theory.expected_min_length_power(n, c0, g, theory.VARIANT_GAMMA2),
               mp_min_length_power(n, c0, g, 2))
        _close(theory.expected_min_length_power(n, c0, g, theory.VARIANT_GAMMA2GAMMA),
               mp_min_length_power(n, c0, g, 2 * g))
        _close(lambda_star(n, c0), mp_lambda_star_power(n, c0, 1))
        _close(lambda_star_power(n, c0, g), mp_lambda_star_power(n, c0, g))
        _close(theory.sum_product_tail_bound(k, t), mp_sum_product_bound(k, t))
        _close(theory.sum_product_tail_bound_power(k, t, g),
               mp_sum_product_bound_power(k, t, g))
        _close(theory.power_sum_tail_bound(k, g, u), mp_power_sum_bound(k, g, u))
        _close(theory.cheap_path_count_term(n, beta, h), mp_cheap_term(n, beta, h))
        _close(theory.fpp_length_constant(g), 1 / mp.gamma(1 + 1 / mp.mpf(g)) ** mp.mpf(g))


# -- reduction identities ----------------------------------------------

def test_reductions_at_unit_exponent():
    rng = np.random.default_rng(99)
    for _ in range(100):
        n = int(rng.integers(3, 10**6))
        c0 = float(rng.uniform(0.01, 2.0))
        k = int(rng.integers(1, 60))
        t = float(rng.uniform(1e-6, 0.999) * k * k)
        for variant in theory.VARIANTS:
            assert theory.expected_min_length_power(n, c0, 1.0, variant) == \
                pytest.approx(theory.expected_min_length(n, c0), rel=REL)
        assert lambda_star_power(n, c0, 1.0) == pytest.approx(
            lambda_star(n, c0), rel=REL)
        assert theory.sum_product_tail_bound_power(k, t, 1.0) == pytest.approx(
            theory.sum_product_tail_bound(k, t), rel=REL)


def test_validation_errors():
    with pytest.raises(ValueError):
        theory.expected_min_length(2, 0.5)
    with pytest.raises(ValueError):
        theory.expected_min_length(100, 0.0)
    with pytest.raises(ValueError):
        theory.expected_min_length_power(100, 0.5, 1.2)
    with pytest.raises(ValueError):
        theory.expected_min_length_power(100, 0.5, 0.5, "nope")
    with pytest.raises(ValueError):
        theory.power_sum_tail_bound(0, 1.0, 0.5)
    with pytest.raises(ValueError):
        theory.cheap_path_count_term(100, 0.1, 0)
    with pytest.raises(ValueError):
        theory.fpp_length_constant(1.5)
    with pytest.raises(ValueError):
        theory.budget_from_window(100, 1.5)
