"""Randomly weighted complete-graph instances.

An instance is a complete graph on vertices 0..n-1 where every edge
carries an independent (length, cost) pair drawn deterministically from
(seed, u, v, channel) — see `cspath.rng` for the exact mixing function.
The two terminals of interest are vertex 0 (source) and vertex 1 (target).

Storage is either ``implicit`` (weights recomputed on demand; supports
n ~ 10^4 without touching memory) or ``materialized`` (triangular edge
tables in lexicographic (u, v) order).  Both modes return bit-identical
weights for the same (seed, n, distributions).

Instance file format (text)::

    cspath-instance v1
    n=<n> seed=<seed> ldist=<spec> cdist=<spec> storage=<materialized|implicit>
    u v w c          # one line per edge, lexicographic (u, v), u < v
    ...

Weights are written with 17 significant digits (lossless float64 round
trip); ``inf`` encodes an edge removed by truncation.  Implicit files
carry the header only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import EdgeCapError, FormatError
from .rng import COST, LENGTH, DistributionSpec, edge_weight

FILE_MAGIC = "cspath-instance v1"

#: materialization guard: 2*10^7 edges is ~320 MB of float64 tables
DEFAULT_EDGE_CAP = 20_000_000

SOURCE = 0
TARGET = 1


@dataclass(eq=False)
class Instance:
    """Immutable-by-convention complete-graph instance."""

    n: int
    seed: int
    length_dist: DistributionSpec
    cost_dist: DistributionSpec
    storage: str = "implicit"
    w: np.ndarray | None = field(default=None, repr=False)
    c: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 vertices, got n={self.n}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.storage not in ("implicit", "materialized"):
            raise ValueError(f"unknown storage mode {self.storage!r}")
        if self.storage == "materialized":
            m = self.num_edges
            if self.w is None or self.c is None:
                raise ValueError("materialized instance needs edge tables")
            if len(self.w) != m or len(self.c) != m:
                raise ValueError("edge table size does not match n(n-1)/2")

    @property
    def num_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    def edge_index(self, u: int, v: int) -> int:
        """Index of edge {u, v} in lexicographic order; requires u < v."""
        if not 0 <= u < v < self.n:
            raise ValueError(f"invalid edge ({u}, {v}) for n={self.n}")
        return u * (2 * self.n - u - 1) // 2 + (v - u - 1)

    def weight(self, u: int, v: int, channel: int) -> float:
        """Weight of edge {u, v} on a channel; endpoint order is free."""
        if u > v:
            u, v = v, u
        if self.storage == "materialized":
            arr = self.w if channel == LENGTH else self.c
            return float(arr[self.edge_index(u, v)])
        dist = self.length_dist if channel == LENGTH else self.cost_dist
        return edge_weight(self.seed, u, v, channel, dist)

    def kernel_args(self) -> tuple:
        """Arguments consumed by the dijkstra / pareto kernels."""
        mode = 1 if self.storage == "materialized" else 0
        empty = _EMPTY_F8
        warr = self.w if self.w is not None else empty
        carr = self.c if self.c is not None else empty
        lk, lp, lt = self.length_dist.kernel_args()
        ck, cp, ct = self.cost_dist.kernel_args()
        return (mode, warr, carr, np.uint64(self.seed), lk, lp, lt, ck, cp, ct)

    def dense_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """Full symmetric (n, n) weight matrices with +inf on the diagonal.

        Convenience for the brute-force oracle and hand checks; refuses
        absurd sizes.
        """
        if self.n > 4096:
            raise EdgeCapError(f"dense matrices refused for n={self.n}")
        if self.storage == "materialized":
            w, c = self.w, self.c
        else:
            w, c = kernels.materialize(self.n, np.uint64(self.seed),
                                       *self.length_dist.kernel_args(),
                                       *self.cost_dist.kernel_args())
        iu = np.triu_indices(self.n, k=1)
        W = np.full((self.n, self.n), np.inf)
        C = np.full((self.n, self.n), np.inf)
        W[iu] = w
        C[iu] = c
        W.T[iu] = w
        C.T[iu] = c
        return W, C

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        if (self.n, self.seed, self.length_dist, self.cost_dist, self.storage) != \
           (other.n, other.seed, other.length_dist, other.cost_dist, other.storage):
            return False
        for a, b in ((self.w, other.w), (self.c, other.c)):
            if (a is None) != (b is None):
                return False
            if a is not None and not np.array_equal(a, b):
                return False
        return True


_EMPTY_F8 = np.empty(0, dtype=np.float64)


def generate(n: int, seed: int, length_dist: DistributionSpec,
             cost_dist: DistributionSpec, storage: str = "implicit",
             edge_cap: int = DEFAULT_EDGE_CAP) -> Instance:
    """Build an instance; ``materialized`` fills edge tables via the kernels."""
    if storage == "materialized":
        m = n * (n - 1) // 2
        if m > edge_cap:
            raise EdgeCapError(
                f"materializing n={n} needs {m} edges, above the cap of {edge_cap}; "
                "use implicit storage or raise the cap")
        w, c = kernels.materialize(n, np.uint64(seed),
                                   *length_dist.kernel_args(),
                                   *cost_dist.kernel_args())
        return Instance(n, seed, length_dist, cost_dist, "materialized", w, c)
    return Instance(n, seed, length_dist, cost_dist, "implicit")


@dataclass(frozen=True)
class PathResult:
    """A simple 0 -> 1 path with its accumulated length and cost."""

    vertices: tuple[int, ...]
    length: float
    cost: float
    hops: int

    @staticmethod
    def from_vertices(instance: Instance, vertices) -> "PathResult":
        verts = tuple(int(v) for v in vertices)
        if len(verts) < 2 or verts[0] != SOURCE or verts[-1] != TARGET:
            raise ValueError("path must start at vertex 0 and end at vertex 1")
        if len(set(verts)) != len(verts):
            raise ValueError("path revisits a vertex")
        length = 0.0
        cost = 0.0
        for a, b in zip(verts, verts[1:]):
            length += instance.weight(a, b, LENGTH)
            cost += instance.weight(a, b, COST)
        return PathResult(verts, length, cost, len(verts) - 1)

    def verify(self, instance: Instance, rel_tol: float = 1e-12) -> None:
        """Recompute the sums from the instance; raise on mismatch."""
        ref = PathResult.from_vertices(instance, self.vertices)
        if not math.isclose(ref.length, self.length, rel_tol=rel_tol, abs_tol=0.0):
            raise AssertionError(
                f"stored length {self.length!r} != recomputed {ref.length!r}")
        if not math.isclose(ref.cost, self.cost, rel_tol=rel_tol, abs_tol=0.0):
            raise AssertionError(
                f"stored cost {self.cost!r} != recomputed {ref.cost!r}")
        if ref.hops != self.hops:
            raise AssertionError(f"stored hops {self.hops} != {ref.hops}")


def _validate_weight(x: float, dist: DistributionSpec, what: str, lineno: int) -> None:
    if math.isnan(x):
        raise FormatError(f"line {lineno}: {what} is NaN")
    if dist.is_uniform_kind:
        if not 0.0 < x <= 1.0:
            raise FormatError(
                f"line {lineno}: {what}={x!r} outside (0, 1] for {dist.name}")
    else:
        if x < 0.0:
            raise FormatError(f"line {lineno}: {what}={x!r} negative")
        if math.isinf(x) and dist.kind != 3:
            raise FormatError(
                f"line {lineno}: {what} infinite but {dist.name} never truncates")


def write_instance(instance: Instance, path) -> None:
    with open(path, "w") as fh:
        fh.write(FILE_MAGIC + "\n")
        fh.write(
            f"n={instance.n} seed={instance.seed} "
            f"ldist={instance.length_dist.format()} "
            f"cdist={instance.cost_dist.format()} "
            f"storage={instance.storage}\n")
        if instance.storage == "materialized":
            us, vs = np.triu_indices(instance.n, k=1)
            for u, v, w, c in zip(us, vs, instance.w, instance.c):
                fh.write(f"{u} {v} {w:.17g} {c:.17g}\n")


def read_instance(path) -> Instance:
    with open(path) as fh:
        magic = fh.readline().rstrip("\n")
        if magic != FILE_MAGIC:
            raise FormatError(f"bad magic line {magic!r}, expected {FILE_MAGIC!r}")
        header = fh.readline().rstrip("\n")
        fields = {}
        for tok in header.split():
            if "=" not in tok:
                raise FormatError(f"bad header token {tok!r}")
            k, _, val = tok.partition("=")
            fields[k] = val
        missing = {"n", "seed", "ldist", "cdist", "storage"} - fields.keys()
        if missing:
            raise FormatError(f"header missing {sorted(missing)}")
        try:
            n = int(fields["n"])
            seed = int(fields["seed"])
        except ValueError as exc:
            raise FormatError(f"bad header: {exc}") from None
        try:
            ldist = DistributionSpec.parse(fields["ldist"])
            cdist = DistributionSpec.parse(fields["cdist"])
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        storage = fields["storage"]
        if storage == "implicit":
            rest = fh.read().strip()
            if rest:
                raise FormatError("implicit instance must not carry edge lines")
            return Instance(n, seed, ldist, cdist, "implicit")
        if storage != "materialized":
            raise FormatError(f"unknown storage {storage!r}")

        m = n * (n - 1) // 2
        w = np.empty(m)
        c = np.empty(m)
        count = 0
        expect_u, expect_v = 0, 1
        for lineno, line in enumerate(fh, start=3):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise FormatError(f"line {lineno}: expected 'u v w c'")
            try:
                u, v = int(parts[0]), int(parts[1])
                wv, cv = float(parts[2]), float(parts[3])
            except ValueError as exc:
                raise FormatError(f"line {lineno}: {exc}") from None
            if count >= m:
                raise FormatError(
                    f"line {lineno}: more than n(n-1)/2 = {m} edges")
            if (u, v) != (expect_u, expect_v):
                raise FormatError(
                    f"line {lineno}: expected edge ({expect_u}, {expect_v}), got ({u}, {v})")
            _validate_weight(wv, ldist, "w", lineno)
            _validate_weight(cv, cdist, "c", lineno)
            w[count] = wv
            c[count] = cv
            count += 1
            expect_v += 1
            if expect_v == n:
                expect_u += 1
                expect_v = expect_u + 1
        if count != m:
            raise FormatError(f"edge count mismatch: got {count}, expected {m}")
        return Instance(n, seed, ldist, cdist, "materialized", w, c)


def from_arrays(n: int, w, c, length_dist: DistributionSpec | None = None,
                cost_dist: DistributionSpec | None = None, seed: int = 0) -> Instance:
    """Materialized instance from explicit edge tables (tests, hand examples)."""
    w = np.asarray(w, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    return Instance(n, seed,
                    length_dist or DistributionSpec.uniform(),
                    cost_dist or DistributionSpec.uniform(),
                    "materialized", w, c)
