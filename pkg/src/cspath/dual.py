"""Lagrangian machinery for the budget-constrained shortest path.

For a multiplier ``lam >= 0`` the relaxation collapses the two criteria
into one: the shortest path under edge weight ``w + lam*c``.  Its value
minus ``lam*c0`` lower-bounds every feasible path length (weak duality),
is concave and piecewise linear in ``lam``, and is maximized here by
ternary search.  `lambda_star` is the closed-form multiplier estimate that
the asymptotic analysis singles out; `budget_shrink_solve` turns it into a
constructive heuristic by re-solving at progressively shrunken budgets
until the relaxation's own minimizer fits the real budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._backend import kernels
from .errors import DisconnectedError
from .instance import SOURCE, TARGET, Instance, PathResult
from .pareto import OPTIMAL

INFEASIBLE_HEURISTIC = "infeasible_heuristic"

#: budget shrink factors tried in order; the asymptotic argument only says
#: "some vanishing shrink works", so a finite retry ladder is the honest
#: per-instance reading
SHRINK_SCHEDULE = (0.0, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5)

DEFAULT_TOL = 1e-6
MAX_ITERATIONS = 200


def lambda_star(n: int, c0: float) -> float:
    """Closed-form multiplier estimate log^2(n) / (4 c0^2 n) (natural log)."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if not c0 > 0:
        raise ValueError(f"budget must be positive, got {c0}")
    return math.log(n) ** 2 / (4.0 * c0 * c0 * n)


def lambda_star_power(n: int, c0: float, gamma: float) -> float:
    """Multiplier estimate for U**gamma weights:
    log^2(n) / (4 c0^2 Gamma(1/gamma + 1)^(2*gamma) n^gamma)."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if not c0 > 0:
        raise ValueError(f"budget must be positive, got {c0}")
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")
    log_gf = 2.0 * gamma * math.lgamma(1.0 / gamma + 1.0)
    return math.log(n) ** 2 / (4.0 * c0 * c0 * math.exp(log_gf) * n**gamma)


def relaxed_shortest_path(instance: Instance, lam: float) -> tuple[float, PathResult]:
    """Exact shortest 0 -> 1 path under combined weight w + lam*c.

    Returns (minimum combined value, realizing path).  Ties prefer fewer
    hops; remaining ties settle by vertex id through the deterministic
    scan order.  Raises `DisconnectedError` when truncation cut all
    routes.  ``lam == 0`` is the plain shortest-length path and never
    reads the cost channel.
    """
    if not lam >= 0 or math.isinf(lam):
        raise ValueError(f"multiplier must be finite and >= 0, got {lam}")
    dist, parent, _hops = kernels.dijkstra(instance.n, SOURCE, TARGET,
                                           float(lam), *instance.kernel_args())
    value = float(dist[TARGET])
    if math.isinf(value):
        raise DisconnectedError(
            "no finite-weight path from vertex 0 to vertex 1")
    verts = [TARGET]
    v = TARGET
    while v != SOURCE:
        v = int(parent[v])
        verts.append(v)
    verts.reverse()
    return value, PathResult.from_vertices(instance, verts)


def shortest_length_path(instance: Instance) -> tuple[float, PathResult]:
    """Unconstrained shortest path by length (multiplier 0)."""
    return relaxed_shortest_path(instance, 0.0)


@dataclass(frozen=True)
class DualResult:
    lam: float
    relaxed_value: float       # minimum of w + lam*c at the returned lam
    dual_value: float          # relaxed_value - lam*c0: lower bound on the optimum
    path: PathResult
    iterations: int
    evals: int = 0             # shortest-path solves performed


def dual_maximize(instance: Instance, c0: float,
                  tol: float = DEFAULT_TOL) -> DualResult:
    """Maximize the dual lower bound g(lam) = relaxed(lam) - lam*c0.

    g is concave piecewise linear (a minimum of affine functions), so
    ternary search over [0, hi] with hi = max(1, 8*lambda_star) brackets a
    maximizer; the loop stops when the bracket is below tol*hi or after
    200 iterations.  The closed-form lambda_star is always probed, so the
    returned value never falls below that warm start.  Returns the best
    multiplier probed.
    """
    if not c0 > 0:
        raise ValueError(f"budget must be positive, got {c0}")
    hi = max(1.0, 8.0 * lambda_star(instance.n, c0))

    best = {}
    evals = [0]

    def g(lam):
        value, path = relaxed_shortest_path(instance, lam)
        evals[0] += 1
        dual = value - lam * c0
        if not best or dual > best["dual"]:
            best.update(lam=lam, value=value, dual=dual, path=path)
        return dual

    g(0.0)
    g(lambda_star(instance.n, c0))
    g(hi)
    lo = 0.0
    up = hi
    iterations = 0
    while up - lo > tol * hi and iterations < MAX_ITERATIONS:
        m1 = lo + (up - lo) / 3.0
        m2 = up - (up - lo) / 3.0
        if g(m1) < g(m2):
            lo = m1
        else:
            up = m2
        iterations += 1
    return DualResult(lam=best["lam"], relaxed_value=best["value"],
                      dual_value=best["dual"], path=best["path"],
                      iterations=iterations, evals=evals[0])


@dataclass(frozen=True)
class ShrinkSolution:
    """Heuristic primal answer from the budget-shrink ladder.

    ``infeasible_heuristic`` means the ladder and the dual fallback both
    produced over-budget paths; it is not a proof of infeasibility.
    """

    status: str
    path: PathResult | None
    delta: float | None        # shrink factor that succeeded, None for the fallback
    lam: float                 # multiplier whose relaxation produced the path
    relax_calls: int

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


def _instance_gamma(instance: Instance) -> float:
    ld, cd = instance.length_dist, instance.cost_dist
    if ld.is_uniform_kind and cd.is_uniform_kind and ld.gamma == cd.gamma:
        return ld.gamma
    return 1.0


def budget_shrink_solve(instance: Instance, c0: float) -> ShrinkSolution:
    """Constructive near-optimal search: relax at the closed-form
    multiplier of a shrunken budget, keep the first within-budget path.

    Walks `SHRINK_SCHEDULE`; each step sets budget c0*(1-delta), takes the
    corresponding lambda_star (power-aware for U**gamma instances) and
    checks whether that relaxation's minimizer already costs <= c0.  Falls
    back to a full dual maximization when the ladder fails.
    """
    if not c0 > 0:
        raise ValueError(f"budget must be positive, got {c0}")
    gamma = _instance_gamma(instance)
    calls = 0
    for delta in SHRINK_SCHEDULE:
        shrunk = c0 * (1.0 - delta)
        lam = lambda_star_power(instance.n, shrunk, gamma)
        _value, path = relaxed_shortest_path(instance, lam)
        calls += 1
        if path.cost <= c0:
            return ShrinkSolution(OPTIMAL, path, delta, lam, calls)
    result = dual_maximize(instance, c0)
    calls += result.evals
    if result.path.cost <= c0:
        return ShrinkSolution(OPTIMAL, result.path, None, result.lam, calls)
    return ShrinkSolution(INFEASIBLE_HEURISTIC, None, None, result.lam, calls)
