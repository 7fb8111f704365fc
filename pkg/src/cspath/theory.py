"""Closed-form predictions and probability bounds for random instances.

Everything here is plain scalar math (natural logarithms throughout, all
factorial/Gamma work in log space so sums can run to hop counts in the
thousands without overflow).  The test suite re-derives each formula with
a 60-digit mpmath evaluation and checks the probability bounds against
Monte Carlo estimates.

Two variants of the power-weight length prediction are exposed because
the two natural derivations disagree for gamma < 1: one carries
Gamma(1/gamma + 1)**2 in the denominator, the other
Gamma(1/gamma + 1)**(2*gamma).  They coincide at gamma = 1; reports print
both rather than silently picking a side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

VARIANT_GAMMA2 = "gamma2"
VARIANT_GAMMA2GAMMA = "gamma2gamma"
VARIANTS = (VARIANT_GAMMA2, VARIANT_GAMMA2GAMMA)


def _check_n(n: int) -> None:
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")


def _check_gamma(gamma: float) -> None:
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")


# ----------------------------------------------------------------------
# asymptotics of the constrained optimum
# ----------------------------------------------------------------------

def expected_min_length(n: int, c0: float) -> float:
    """Predicted optimal length log^2(n) / (4 c0 n) for uniform weights."""
    _check_n(n)
    if not c0 > 0:
        raise ValueError(f"budget must be positive, got {c0}")
    return math.log(n) ** 2 / (4.0 * c0 * n)


def expected_hops(n: int) -> float:
    """Predicted hop count log(n) / 2 of the constrained optimum."""
    _check_n(n)
    return math.log(n) / 2.0


def expected_min_length_power(n: int, c0: float, gamma: float,
                              variant: str = VARIANT_GAMMA2) -> float:
    """Predicted optimal length for U**gamma weights.

    gamma * log^2(n) / (4 * Gamma(1/gamma+1)**e * c0 * n**gamma) with
    e = 2 for ``gamma2`` and e = 2*gamma for ``gamma2gamma``.
    """
    _check_n(n)
    _check_gamma(gamma)
    if not c0 > 0:
        raise ValueError(f"budget must be positive, got {c0}")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    exponent = 2.0 if variant == VARIANT_GAMMA2 else 2.0 * gamma
    log_gf = exponent * math.lgamma(1.0 / gamma + 1.0)
    return gamma * math.log(n) ** 2 / (4.0 * math.exp(log_gf) * c0 * n**gamma)


def expected_hops_power(n: int, gamma: float) -> float:
    """Predicted hop count gamma * log(n) / 2 for U**gamma weights."""
    _check_n(n)
    _check_gamma(gamma)
    return gamma * math.log(n) / 2.0


def budget_window(n: int) -> tuple[float, float]:
    """Budget range where the uniform-weight prediction is supported:
    [log^2(n) / (sqrt(2) n), 1 / (2 sqrt(2))]."""
    _check_n(n)
    return math.log(n) ** 2 / (math.sqrt(2.0) * n), 1.0 / (2.0 * math.sqrt(2.0))


def budget_window_power(n: int, gamma: float) -> tuple[float, float]:
    """Working budget range for U**gamma weights: the uniform window with
    its lower end rescaled by n**(1-gamma).

    The power-weight theory only promises gamma-dependent constants, so
    this is an artifact choice, not a derived bound.
    """
    _check_gamma(gamma)
    lo, hi = budget_window(n)
    return lo * n ** (1.0 - gamma), hi


def budget_from_window(n: int, fraction: float, gamma: float = 1.0) -> float:
    """Budget at a linear fraction of the (power-aware) window."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"window fraction must be in [0, 1], got {fraction}")
    lo, hi = budget_window_power(n, gamma)
    return lo + fraction * (hi - lo)


# ----------------------------------------------------------------------
# probability bounds
# ----------------------------------------------------------------------

def sum_product_tail_bound(k: int, t: float) -> float:
    """Upper bound on P(S*T <= t) for independent S, T, each a sum of k
    iid uniforms: (t^k / k!^2) * (k log(k^2/t) + 2 k!/k^k).

    Valid for 0 < t < k^2; log-Gamma arithmetic keeps k in the hundreds
    finite.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if not 0 < t < k * k:
        raise ValueError(f"t must satisfy 0 < t < k^2 = {k * k}, got {t}")
    log_lead = k * math.log(t) - 2.0 * math.lgamma(k + 1.0)
    bracket = k * math.log(k * k / t) + 2.0 * math.exp(
        math.lgamma(k + 1.0) - k * math.log(k))
    return math.exp(log_lead + math.log(bracket))


def sum_product_tail_bound_power(k: int, t: float, gamma: float) -> float:
    """Power-weight version of `sum_product_tail_bound` for sums of
    U**gamma:

    (t^(k/g) G(1/g+1)^(2k) / G(k/g+1)^2)
        * ((k/g) log(k^2/t) + 2 G(k/g+1) / (k^k G(1/g+1)^k))

    with G the Gamma function; reduces to the uniform bound at gamma 1.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if not 0 < t < k * k:
        raise ValueError(f"t must satisfy 0 < t < k^2 = {k * k}, got {t}")
    _check_gamma(gamma)
    kg = k / gamma
    lg1 = math.lgamma(1.0 / gamma + 1.0)
    lgk = math.lgamma(kg + 1.0)
    log_lead = kg * math.log(t) + 2.0 * k * lg1 - 2.0 * lgk
    # bracket = kg*log(k^2/t) + 2*exp(lgk - k*log(k) - k*lg1); the second
    # term alone overflows for small gamma, so combine in log space
    a = kg * math.log(k * k / t)
    log_b = math.log(2.0) + lgk - k * math.log(k) - k * lg1
    if a <= 0.0:
        log_bracket = log_b
    else:
        hi_, lo_ = max(math.log(a), log_b), min(math.log(a), log_b)
        log_bracket = hi_ + math.log1p(math.exp(lo_ - hi_))
    try:
        return math.exp(log_lead + log_bracket)
    except OverflowError:
        return math.inf


def power_sum_tail_bound(k: int, gamma: float, u: float) -> float:
    """Upper bound on P(U_1^g + ... + U_k^g <= u):
    u^(k/g) Gamma(1/g+1)^k / Gamma(k/g+1).

    Tight (an equality) for gamma = 1 and u <= 1.  Any gamma > 0 is
    accepted here; the bound is a plain simplex-volume computation.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if u < 0:
        raise ValueError(f"u must be nonnegative, got {u}")
    if u == 0.0:
        return 0.0
    return math.exp((k / gamma) * math.log(u)
                    + k * math.lgamma(1.0 / gamma + 1.0)
                    - math.lgamma(k / gamma + 1.0))


def min_product_bound(n: int, gamma: float = 1.0) -> float:
    """Asymptotic lower bound on min over paths of length*cost:
    log^2(n) / (4 Gamma(1/gamma+1)^(2*gamma) n^gamma)."""
    _check_n(n)
    _check_gamma(gamma)
    log_gf = 2.0 * gamma * math.lgamma(1.0 / gamma + 1.0)
    return math.log(n) ** 2 / (4.0 * math.exp(log_gf) * n**gamma)


# ----------------------------------------------------------------------
# first-moment count of cheap paths
# ----------------------------------------------------------------------

def first_moment_beta(n: int) -> float:
    """The product-threshold coefficient (1 - 1/sqrt(log n))^2 / 4 that
    makes the expected count of cheap paths vanish."""
    _check_n(n)
    return 0.25 * (1.0 - 1.0 / math.sqrt(math.log(n))) ** 2


def cheap_path_count_term(n: int, beta: float, hops: int) -> float:
    """Expected number of 0 -> 1 paths with ``hops`` edges whose
    length*cost product is below beta*log^2(n)/n:

    n^(h-1) (1/h!^2) (beta log^2 n / n)^h (h log(h^2 n/(beta log^2 n)) + 2 h!/h^h)

    evaluated in log space.
    """
    _check_n(n)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if not 1 <= hops <= n - 1:
        raise ValueError(f"hops must be in [1, n-1], got {hops}")
    h = float(hops)
    logn = math.log(n)
    log_lead = ((h - 1.0) * logn - 2.0 * math.lgamma(h + 1.0)
                + h * (math.log(beta) + 2.0 * math.log(logn) - logn))
    bracket = (h * math.log(h * h * n / (beta * logn * logn))
               + 2.0 * math.exp(math.lgamma(h + 1.0) - h * math.log(h)))
    if bracket <= 0.0:
        return math.exp(log_lead) * bracket
    return math.exp(log_lead + math.log(bracket))


def expected_cheap_path_count(n: int, beta: float,
                              floor: float = 1e-300) -> float:
    """Sum of `cheap_path_count_term` over all hop counts 1..n-1.

    Terms rise to a peak near sqrt(beta)*log(n) hops and then decay
    superexponentially; summation stops once past the peak and below
    ``floor``, which cannot move any reported digit.
    """
    _check_n(n)
    peak = math.sqrt(beta) * math.log(n)
    total = 0.0
    for hops in range(1, n):
        term = cheap_path_count_term(n, beta, hops)
        total += term
        if hops > peak and term < floor:
            break
    return total


# ----------------------------------------------------------------------
# first-passage percolation with stretched-exponential weights
# ----------------------------------------------------------------------

def fpp_length_constant(s: float) -> float:
    """Centering constant 1 / Gamma(1 + 1/s)^s for shortest paths under
    (exponential)^s edge weights."""
    if not 0 < s <= 1:
        raise ValueError(f"s must be in (0, 1], got {s}")
    return math.exp(-s * math.lgamma(1.0 + 1.0 / s))


def fpp_expected_length(n: int, s: float) -> float:
    """Predicted shortest-path length log(n) * fpp_length_constant(s) / n^s."""
    _check_n(n)
    return fpp_length_constant(s) * math.log(n) / n**s


# ----------------------------------------------------------------------
# bundled prediction
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticPrediction:
    L_pred: float
    H_pred: float
    lambda_star: float
    c0_lo: float
    c0_hi: float
    variant: str


def predict(n: int, c0: float, gamma: float = 1.0,
            variant: str = VARIANT_GAMMA2) -> AsymptoticPrediction:
    """All the closed forms for one (n, c0, gamma) in a single record."""
    from .dual import lambda_star_power  # local import to avoid a cycle

    lo, hi = budget_window_power(n, gamma)
    return AsymptoticPrediction(
        L_pred=expected_min_length_power(n, c0, gamma, variant),
        H_pred=expected_hops_power(n, gamma),
        lambda_star=lambda_star_power(n, c0, gamma),
        c0_lo=lo,
        c0_hi=hi,
        variant=variant,
    )
