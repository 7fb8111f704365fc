"""Exact constrained shortest paths via bicriteria Pareto frontiers.

`pareto_frontier` runs a label-setting search that computes, for every
node, the full set of nondominated (length, cost) pairs over simple paths
from the source, with parent links for path reconstruction.  `solve_csp`
reads the optimum under a cost budget off the target frontier,
`min_product` reads the minimum length*cost (the minimizer of a product of
positive coordinates over any set is never dominated, so it lies on the
frontier).

`brute_force_csp` is the independent oracle: it enumerates every simple
0 -> 1 path through permutations of internal vertices.  It shares nothing
with the label-setting path except the instance itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DisconnectedError, FrontierCapError
from .instance import SOURCE, TARGET, Instance, PathResult

#: default guard on total installed labels; polynomial frontiers never get
#: close, so hitting this signals a bug or an adversarial file instance
DEFAULT_LABEL_CAP = 100_000_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Label:
    """One nondominated prefix path ending at ``node``."""

    node: int
    length: float
    cost: float
    hops: int
    index: int   # position in the frontier's flat label arrays
    parent: int  # flat index of the predecessor label, -1 at the source


@dataclass(frozen=True)
class FrontierStats:
    total_labels: int
    max_labels_per_node: int
    labels_at_target: int


class ParetoFrontier:
    """Per-node Pareto label sets from one label-setting run.

    Flat arrays hold all installed labels in pop order; per node that
    order is strictly increasing length and strictly decreasing cost.
    """

    def __init__(self, n, source, lengths, costs, nodes, parents, hops):
        self.n = n
        self.source = source
        self.lengths = lengths
        self.costs = costs
        self.nodes = nodes
        self.parents = parents
        self.hops = hops
        order = np.argsort(nodes, kind="stable")
        self._order = order
        self._starts = np.searchsorted(nodes[order], np.arange(n + 1))

    @property
    def total_labels(self) -> int:
        return len(self.lengths)

    def node_indices(self, v: int) -> np.ndarray:
        """Flat label indices at node v, sorted by increasing length."""
        return self._order[self._starts[v]:self._starts[v + 1]]

    def size_at(self, v: int) -> int:
        return int(self._starts[v + 1] - self._starts[v])

    def labels_at(self, v: int) -> list[Label]:
        return [Label(v, float(self.lengths[i]), float(self.costs[i]),
                      int(self.hops[i]), int(i), int(self.parents[i]))
                for i in self.node_indices(v)]

    def pairs_at(self, v: int) -> np.ndarray:
        """(k, 2) array of (length, cost) rows at node v."""
        idx = self.node_indices(v)
        return np.column_stack((self.lengths[idx], self.costs[idx]))

    def stats(self, target: int = TARGET) -> FrontierStats:
        sizes = np.diff(self._starts)
        return FrontierStats(
            total_labels=self.total_labels,
            max_labels_per_node=int(sizes.max()) if len(sizes) else 0,
            labels_at_target=self.size_at(target),
        )

    def path_of(self, index: int) -> PathResult:
        """Reconstruct the path of a label through its parent links."""
        verts = []
        i = int(index)
        while i >= 0:
            verts.append(int(self.nodes[i]))
            i = int(self.parents[i])
        verts.reverse()
        if len(set(verts)) != len(verts):  # impossible with positive weights
            raise AssertionError("label parent chain revisits a vertex")
        return PathResult(tuple(verts), float(self.lengths[index]),
                          float(self.costs[index]), int(self.hops[index]))


@dataclass(frozen=True)
class CspSolution:
    status: str
    path: PathResult | None
    frontier_stats: FrontierStats | None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


def pareto_frontier(instance: Instance, source: int = SOURCE,
                    label_cap: int = DEFAULT_LABEL_CAP) -> ParetoFrontier:
    """Exact per-node Pareto frontiers of simple paths from ``source``."""
    if not 0 <= source < instance.n:
        raise ValueError(f"source {source} out of range for n={instance.n}")
    lengths, costs, nodes, parents, hops, count, status, over_node = \
        kernels.pareto_labels(instance.n, source, *instance.kernel_args(),
                              label_cap)
    if status == 1:
        raise FrontierCapError(int(over_node), label_cap)
    return ParetoFrontier(instance.n, source, lengths[:count], costs[:count],
                          nodes[:count], parents[:count], hops[:count])


def solve_from_frontier(frontier: ParetoFrontier, c0: float,
                        target: int = TARGET) -> CspSolution:
    """Budget-feasible minimum length off a precomputed frontier.

    Target labels are sorted by increasing length with strictly decreasing
    cost, so the feasible labels form a suffix and the first feasible one
    is the optimum (no length ties can survive installation; the
    smaller-cost/fewer-hops tie-breaks are vacuous on a strict frontier).
    """
    stats = frontier.stats(target)
    idx = frontier.node_indices(target)
    for i in idx:
        if frontier.costs[i] <= c0:
            return CspSolution(OPTIMAL, frontier.path_of(int(i)), stats)
    return CspSolution(INFEASIBLE, None, stats)


def solve_csp(instance: Instance, c0: float,
              label_cap: int = DEFAULT_LABEL_CAP) -> CspSolution:
    """Minimize path length subject to path cost <= c0, exactly."""
    if c0 < 0:
        raise ValueError(f"budget must be nonnegative, got {c0}")
    return solve_from_frontier(pareto_frontier(instance, SOURCE, label_cap), c0)


def min_product_from_frontier(frontier: ParetoFrontier,
                              target: int = TARGET) -> float:
    idx = frontier.node_indices(target)
    if len(idx) == 0:
        raise DisconnectedError("no finite path reaches the target")
    return float(np.min(frontier.lengths[idx] * frontier.costs[idx]))


def min_product(instance: Instance, label_cap: int = DEFAULT_LABEL_CAP) -> float:
    """min over 0 -> 1 paths of length(P) * cost(P).

    Coordinatewise dominance implies product dominance for positive pairs,
    so scanning the target frontier is exact; the brute-force oracle
    asserts this reduction on small instances.
    """
    return min_product_from_frontier(pareto_frontier(instance, SOURCE, label_cap))


# ----------------------------------------------------------------------
# brute-force oracle
# ----------------------------------------------------------------------

BRUTE_FORCE_MAX_N = 12


def enumerate_st_paths(instance: Instance):
    """Yield (length, cost, vertices) for every simple 0 -> 1 path.

    (n-2)! blowup; refuses n > 12.  Infinite edges are skipped.
    """
    n = instance.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force refuses n={n} > {BRUTE_FORCE_MAX_N}")
    W, C = instance.dense_matrices()
    visited = [False] * n
    path = [SOURCE]
    visited[SOURCE] = True
    out = []

    def rec(u, length, cost):
        if np.isfinite(W[u, TARGET]) and np.isfinite(C[u, TARGET]):
            out.append((length + W[u, TARGET], cost + C[u, TARGET],
                        tuple(path) + (TARGET,)))
        for t in range(2, n):
            if not visited[t] and np.isfinite(W[u, t]) and np.isfinite(C[u, t]):
                visited[t] = True
                path.append(t)
                rec(u=t, length=length + W[u, t], cost=cost + C[u, t])
                path.pop()
                visited[t] = False

    rec(SOURCE, 0.0, 0.0)
    return out


def brute_force_csp(instance: Instance, c0: float) -> CspSolution:
    """Independent exhaustive solver; same contract as `solve_csp`.

    Ties break by (length, cost, hops, vertex sequence) so the result is
    deterministic even on degenerate hand-built instances.  Frontier
    statistics are not measured here (``frontier_stats is None``).
    """
    best = None
    for length, cost, verts in enumerate_st_paths(instance):
        if cost <= c0:
            key = (length, cost, len(verts) - 1, verts)
            if best is None or key < best:
                best = key
    if best is None:
        return CspSolution(INFEASIBLE, None, None)
    length, cost, hops, verts = best
    return CspSolution(OPTIMAL, PathResult(verts, float(length), float(cost), hops), None)


def brute_force_min_product(instance: Instance) -> float:
    """min length*cost over all simple 0 -> 1 paths, by full enumeration."""
    paths = enumerate_st_paths(instance)
    if not paths:
        raise DisconnectedError("no finite path reaches the target")
    return min(length * cost for length, cost, _ in paths)


def brute_force_frontier(instance: Instance, node: int = TARGET) -> list[tuple[float, float]]:
    """Nondominated (length, cost) pairs over simple 0 -> node paths.

    Enumerates every simple path from the source (passing through the
    target is allowed, matching the solver's path set) and filters by
    weak dominance.  Practical only for small n; used to validate
    `pareto_frontier` per node.
    """
    n = instance.n
    if n > 9:
        raise ValueError(f"frontier enumeration refuses n={n} > 9")
    W, C = instance.dense_matrices()
    found = []
    visited = [False] * n
    visited[SOURCE] = True

    def rec(u, length, cost):
        if u == node:
            found.append((length, cost))
        for t in range(n):
            if not visited[t] and np.isfinite(W[u, t]) and np.isfinite(C[u, t]):
                visited[t] = True
                rec(t, length + W[u, t], cost + C[u, t])
                visited[t] = False

    rec(SOURCE, 0.0, 0.0)
    found.sort()
    frontier = []
    best_cost = np.inf
    for length, cost in found:
        if cost < best_cost:
            frontier.append((length, cost))
            best_cost = cost
    return frontier
