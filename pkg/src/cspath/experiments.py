"""Monte Carlo harness: seeded trials, CSV/JSON persistence, aggregation.

A run is described by an `ExperimentConfig`; every trial draws its
instance seed as ``derive_seed(master_seed, n, trial)`` so any single
trial can be reproduced in isolation.  Trials execute in a thread pool
(the kernels release the GIL); records are sorted by (n, trial, method)
before writing and aggregating, so the worker count never changes the
output.

Persisted artifacts, formats fixed:

* trial CSV, header
  ``n,c0,gamma,trial,seed,method,status,L,cost,H,runtime_ms,labels,lambda_hat,dual_value,min_product``
  with empty fields where a column does not apply and 17-significant-digit
  decimals;
* aggregate JSON keyed ``n=<n>/c0=<c0>/method=<m>``.

The config file is flat ``key=value`` text, one key per line, ``#``
comments allowed::

    name=gap-trend
    n_grid=100,300,1000        # comma-separated ints
    c0_rule=window:0.5         # or abs:<value>
    gamma=1
    trials=30
    master_seed=20240601
    methods=exact,dual         # subset of exact,dual,shrink
    exact_n_cap=2000
    workers=0                  # 0 = one per cpu
    output_dir=out
"""

from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import theory
from .dual import budget_shrink_solve, dual_maximize
from .dual import relaxed_shortest_path
from .errors import DisconnectedError, FormatError, FrontierCapError
from .instance import Instance, generate
from .pareto import (OPTIMAL, min_product_from_frontier, pareto_frontier,
                     solve_from_frontier)
from .rng import DistributionSpec, derive_seed

log = logging.getLogger("cspath")

METHOD_EXACT = "exact"
METHOD_DUAL = "dual"
METHOD_SHRINK = "shrink"
METHODS = (METHOD_EXACT, METHOD_DUAL, METHOD_SHRINK)

CSV_HEADER = ("n,c0,gamma,trial,seed,method,status,L,cost,H,runtime_ms,"
              "labels,lambda_hat,dual_value,min_product")

STATUS_ERROR = "error"


@dataclass(frozen=True)
class BudgetRule:
    """Either a fixed budget or a linear fraction of the theory window."""

    kind: str                  # "abs" | "window"
    value: float

    def budget(self, n: int, gamma: float) -> float:
        if self.kind == "abs":
            return self.value
        return theory.budget_from_window(n, self.value, gamma)

    def format(self) -> str:
        return f"{self.kind}:{self.value:.17g}"

    @staticmethod
    def parse(text: str) -> "BudgetRule":
        kind, _, val = text.partition(":")
        if kind not in ("abs", "window") or not val:
            raise FormatError(f"bad c0_rule {text!r}, expected abs:<v> or window:<f>")
        value = float(val)
        if kind == "window" and not 0.0 <= value <= 1.0:
            raise FormatError(f"window fraction must be in [0, 1], got {value}")
        return BudgetRule(kind, value)


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    n_grid: tuple[int, ...]
    c0_rule: BudgetRule
    gamma: float = 1.0
    trials: int = 30
    master_seed: int = 1
    methods: tuple[str, ...] = (METHOD_EXACT,)
    exact_n_cap: int = 2000
    workers: int = 0           # 0: one worker per cpu
    output_dir: str = "out"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if list(self.n_grid) != sorted(self.n_grid):
            raise ValueError("n_grid must be sorted ascending")
        bad = set(self.methods) - set(METHODS)
        if bad:
            raise ValueError(f"unknown methods {sorted(bad)}")
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")


def write_config(config: ExperimentConfig, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"name={config.name}\n")
        fh.write(f"n_grid={','.join(str(n) for n in config.n_grid)}\n")
        fh.write(f"c0_rule={config.c0_rule.format()}\n")
        fh.write(f"gamma={config.gamma:.17g}\n")
        fh.write(f"trials={config.trials}\n")
        fh.write(f"master_seed={config.master_seed}\n")
        fh.write(f"methods={','.join(config.methods)}\n")
        fh.write(f"exact_n_cap={config.exact_n_cap}\n")
        fh.write(f"workers={config.workers}\n")
        fh.write(f"output_dir={config.output_dir}\n")


def read_config(path) -> ExperimentConfig:
    fields = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FormatError(f"config line {lineno}: expected key=value")
            key, _, val = line.partition("=")
            fields[key.strip()] = val.strip()
    try:
        return ExperimentConfig(
            name=fields["name"],
            n_grid=tuple(int(x) for x in fields["n_grid"].split(",")),
            c0_rule=BudgetRule.parse(fields["c0_rule"]),
            gamma=float(fields.get("gamma", "1")),
            trials=int(fields.get("trials", "30")),
            master_seed=int(fields.get("master_seed", "1")),
            methods=tuple(fields.get("methods", "exact").split(",")),
            exact_n_cap=int(fields.get("exact_n_cap", "2000")),
            workers=int(fields.get("workers", "0")),
            output_dir=fields.get("output_dir", "out"),
        )
    except KeyError as exc:
        raise FormatError(f"config missing key {exc.args[0]!r}") from None
    except ValueError as exc:
        raise FormatError(f"bad config value: {exc}") from None


@dataclass(frozen=True)
class TrialRecord:
    """One Monte Carlo observation; optional fields are None when the
    column does not apply to the method."""

    n: int
    c0: float
    gamma: float
    trial: int
    seed: int
    method: str
    status: str
    L: float | None = None
    cost: float | None = None
    H: int | None = None
    runtime_ms: float | None = None
    labels: int | None = None
    lambda_hat: float | None = None
    dual_value: float | None = None
    min_product: float | None = None


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def record_to_csv_line(r: TrialRecord) -> str:
    return ",".join([
        str(r.n), _fmt(r.c0), _fmt(r.gamma), str(r.trial), str(r.seed),
        r.method, r.status, _fmt(r.L), _fmt(r.cost), _fmt(r.H),
        _fmt(r.runtime_ms), _fmt(r.labels), _fmt(r.lambda_hat),
        _fmt(r.dual_value), _fmt(r.min_product),
    ])


def write_records(records, path) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(record_to_csv_line(r) + "\n")


def read_records(path) -> list[TrialRecord]:
    records = []
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise FormatError(f"unexpected CSV header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 15:
                raise FormatError(f"CSV line {lineno}: expected 15 fields")
            def opt(s, conv):
                return None if s == "" else conv(s)
            records.append(TrialRecord(
                n=int(parts[0]), c0=float(parts[1]), gamma=float(parts[2]),
                trial=int(parts[3]), seed=int(parts[4]), method=parts[5],
                status=parts[6], L=opt(parts[7], float),
                cost=opt(parts[8], float), H=opt(parts[9], int),
                runtime_ms=opt(parts[10], float), labels=opt(parts[11], int),
                lambda_hat=opt(parts[12], float),
                dual_value=opt(parts[13], float),
                min_product=opt(parts[14], float)))
    return records


# ----------------------------------------------------------------------
# trial execution
# ----------------------------------------------------------------------

def _instance_for(n: int, seed: int, gamma: float) -> Instance:
    if gamma == 1.0:
        dist = DistributionSpec.uniform()
    else:
        dist = DistributionSpec.uniform_power(gamma)
    return generate(n, seed, dist, dist, storage="implicit")


def run_trial(n: int, c0: float, gamma: float, trial: int, seed: int,
              methods) -> list[TrialRecord]:
    """All requested methods on one instance; errors become records."""
    instance = _instance_for(n, seed, gamma)
    base = dict(n=n, c0=c0, gamma=gamma, trial=trial, seed=seed)
    out = []
    for method in methods:
        t0 = time.perf_counter()
        try:
            if method == METHOD_EXACT:
                frontier = pareto_frontier(instance)
                sol = solve_from_frontier(frontier, c0)
                mp = min_product_from_frontier(frontier)
                ms = (time.perf_counter() - t0) * 1e3
                if sol.is_optimal:
                    out.append(TrialRecord(
                        **base, method=method, status=sol.status,
                        L=sol.path.length, cost=sol.path.cost,
                        H=sol.path.hops, runtime_ms=ms,
                        labels=sol.frontier_stats.total_labels,
                        min_product=mp))
                else:
                    out.append(TrialRecord(
                        **base, method=method, status=sol.status,
                        runtime_ms=ms,
                        labels=sol.frontier_stats.total_labels,
                        min_product=mp))
            elif method == METHOD_DUAL:
                res = dual_maximize(instance, c0)
                ms = (time.perf_counter() - t0) * 1e3
                out.append(TrialRecord(
                    **base, method=method, status=OPTIMAL,
                    L=res.path.length, cost=res.path.cost,
                    H=res.path.hops, runtime_ms=ms,
                    lambda_hat=res.lam, dual_value=res.dual_value))
            elif method == METHOD_SHRINK:
                res = budget_shrink_solve(instance, c0)
                ms = (time.perf_counter() - t0) * 1e3
                if res.is_optimal:
                    out.append(TrialRecord(
                        **base, method=method, status=res.status,
                        L=res.path.length, cost=res.path.cost,
                        H=res.path.hops, runtime_ms=ms, lambda_hat=res.lam))
                else:
                    out.append(TrialRecord(
                        **base, method=method, status=res.status,
                        runtime_ms=ms, lambda_hat=res.lam))
            else:
                raise ValueError(f"unknown method {method!r}")
        except (DisconnectedError, FrontierCapError, MemoryError) as exc:
            ms = (time.perf_counter() - t0) * 1e3
            log.warning("trial n=%d trial=%d method=%s failed: %s",
                        n, trial, method, exc)
            out.append(TrialRecord(**base, method=method,
                                   status=STATUS_ERROR, runtime_ms=ms))
    return out


def _stats(values) -> dict | None:
    if len(values) == 0:
        return None
    arr = np.asarray(values, dtype=np.float64)
    return {
        "median": float(np.median(arr)),
        "mean": float(np.mean(arr)),
        "q25": float(np.percentile(arr, 25)),
        "q75": float(np.percentile(arr, 75)),
    }


def aggregate_records(records) -> dict:
    """Deterministic per-(n, c0, method) summary of a record list.

    Ratios compare against the closed-form predictions (both power-weight
    variants), hop counts against gamma*log(n)/2, min_product against the
    product lower bound, and the per-trial duality gap joins each dual
    record with the exact record of the same trial.
    """
    records = sorted(records, key=lambda r: (r.n, r.trial, r.method))
    exact_L = {}
    for r in records:
        if r.method == METHOD_EXACT and r.status == OPTIMAL:
            exact_L[(r.n, r.trial)] = r.L

    groups: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        groups.setdefault((r.n, r.c0, r.method), []).append(r)

    report = {}
    for (n, c0, method), recs in sorted(groups.items()):
        gamma = recs[0].gamma
        ok = [r for r in recs if r.status != STATUS_ERROR]
        opt = [r for r in ok if r.L is not None]
        L = [r.L for r in opt]
        H = [r.H for r in opt]
        pred2 = theory.expected_min_length_power(n, c0, gamma,
                                                 theory.VARIANT_GAMMA2)
        pred2g = theory.expected_min_length_power(n, c0, gamma,
                                                  theory.VARIANT_GAMMA2GAMMA)
        hop_pred = theory.expected_hops_power(n, gamma)
        entry = {
            "n": n,
            "c0": c0,
            "gamma": gamma,
            "method": method,
            "trials": len(recs),
            "errors": len(recs) - len(ok),
            "infeasible": sum(1 for r in ok if r.L is None),
            "L": _stats(L),
            "H": _stats(H),
            "ratio_gamma2": _stats([x / pred2 for x in L]),
            "ratio_gamma2gamma": _stats([x / pred2g for x in L]),
            "hop_ratio": _stats([h / hop_pred for h in H]),
        }
        if method == METHOD_DUAL:
            gaps = [(exact_L[(r.n, r.trial)] - r.dual_value) / exact_L[(r.n, r.trial)]
                    for r in ok
                    if r.dual_value is not None and (r.n, r.trial) in exact_L]
            entry["gap"] = _stats(gaps)
        if method == METHOD_EXACT:
            bound = theory.min_product_bound(n, gamma)
            mps = [r.min_product for r in ok if r.min_product is not None]
            entry["min_product_ratio"] = _stats([m / bound for m in mps])
        report[f"n={n}/c0={c0:.17g}/method={method}"] = entry
    return report


def run_experiment(config: ExperimentConfig,
                   output_dir: str | None = None) -> tuple[list[TrialRecord], dict]:
    """Execute the whole grid, persist CSV and JSON, return both.

    Raises RuntimeError when more than 10% of the records errored
    (after persisting, so the partial data stays inspectable).
    """
    out_dir = Path(output_dir if output_dir is not None else config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    jobs = []
    for n in config.n_grid:
        c0 = config.c0_rule.budget(n, config.gamma)
        methods = list(config.methods)
        if n > config.exact_n_cap and METHOD_EXACT in methods:
            methods.remove(METHOD_EXACT)
            log.info("n=%d above exact_n_cap=%d: skipping exact method",
                     n, config.exact_n_cap)
        if not methods:
            continue
        for trial in range(config.trials):
            seed = derive_seed(config.master_seed, n, trial)
            jobs.append((n, c0, config.gamma, trial, seed, tuple(methods)))

    workers = config.workers if config.workers > 0 else (os.cpu_count() or 1)
    records: list[TrialRecord] = []
    if workers == 1:
        for job in jobs:
            records.extend(run_trial(*job))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for result in pool.map(lambda j: run_trial(*j), jobs):
                records.extend(result)

    records.sort(key=lambda r: (r.n, r.trial, r.method))
    csv_path = out_dir / f"{config.name}_trials.csv"
    write_records(records, csv_path)
    report = aggregate_records(records)
    report_path = out_dir / f"{config.name}_report.json"
    with open(report_path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")

    errored = sum(1 for r in records if r.status == STATUS_ERROR)
    if records and errored > 0.1 * len(records):
        raise RuntimeError(
            f"{errored}/{len(records)} trials errored; see {csv_path}")
    return records, report


# ----------------------------------------------------------------------
# focused experiments
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FppTrial:
    trial: int
    seed: int
    length: float
    hops: int
    centered: float            # n^s * L - log(n) * fpp_length_constant(s)


def fpp_experiment(n: int, s: float, trials: int, master_seed: int) -> list[FppTrial]:
    """Shortest-path lengths under (exponential)^s edge weights.

    Single-criterion runs; the cost channel is never read.  ``centered``
    is the statistic whose distributional convergence motivates the
    multiplier estimate; desk-scale medians of length and hop ratios are
    what the acceptance suite checks.
    """
    if not 0 < s < 1:
        raise ValueError(f"s must be in (0, 1), got {s}")
    const = theory.fpp_length_constant(s)
    logn = math.log(n)
    out = []
    for trial in range(trials):
        seed = derive_seed(master_seed, n, trial)
        instance = generate(n, seed, DistributionSpec.exp_power(s),
                            DistributionSpec.uniform(), storage="implicit")
        value, path = relaxed_shortest_path(instance, 0.0)
        out.append(FppTrial(trial=trial, seed=seed, length=value,
                            hops=path.hops,
                            centered=n**s * value - logn * const))
    return out


def fpp_summary(n: int, s: float, trials_list: list[FppTrial]) -> dict:
    logn = math.log(n)
    const = theory.fpp_length_constant(s)
    lr = [t.length * n**s / (logn * const) for t in trials_list]
    hr = [t.hops / (s * logn) for t in trials_list]
    return {
        "n": n, "s": s, "trials": len(trials_list),
        "length_ratio": _stats(lr),
        "hop_ratio": _stats(hr),
        "centered": _stats([t.centered for t in trials_list]),
    }


@dataclass(frozen=True)
class TruncationResult:
    n: int
    threshold: float
    trials: int
    equal: int
    disconnected: int

    @property
    def equal_fraction(self) -> float:
        return self.equal / self.trials


def truncation_experiment(n: int, trials: int, master_seed: int,
                          threshold: float | None = None) -> TruncationResult:
    """Fraction of trials where cutting every edge whose underlying
    exponential exceeds log^2(n)/n leaves the shortest-path length
    unchanged.

    Both runs of a trial share one seed, so the kept edges carry
    bit-identical weights and equality is exact float equality.  A
    disconnected truncated graph counts as unequal.
    """
    if n < 64:
        raise ValueError(f"need n >= 64, got {n}")
    thr = math.log(n) ** 2 / n if threshold is None else threshold
    equal = 0
    disconnected = 0
    plain = DistributionSpec.exp_power(0.5)
    cut = DistributionSpec.trunc_exp_power(0.5, thr)
    unused = DistributionSpec.uniform()
    for trial in range(trials):
        seed = derive_seed(master_seed, n, trial)
        full_value, _ = relaxed_shortest_path(
            generate(n, seed, plain, unused, storage="implicit"), 0.0)
        try:
            cut_value, _ = relaxed_shortest_path(
                generate(n, seed, cut, unused, storage="implicit"), 0.0)
        except DisconnectedError:
            disconnected += 1
            continue
        if cut_value == full_value:
            equal += 1
    return TruncationResult(n=n, threshold=thr, trials=trials,
                            equal=equal, disconnected=disconnected)


@dataclass(frozen=True)
class FrontierGrowthResult:
    n_grid: tuple[int, ...]
    medians: tuple[float, ...]          # median total labels per n
    slope: float                        # log-log slope vs edge count
    counts: tuple[tuple[int, ...], ...]  # per n: per-trial label totals
    cap_errors: int


def frontier_growth_experiment(n_grid, trials: int,
                               master_seed: int) -> FrontierGrowthResult:
    """Median total Pareto labels per n and the fitted log-log growth
    exponent against the edge count N = n(n-1)/2."""
    medians = []
    counts = []
    cap_errors = 0
    for n in n_grid:
        per_n = []
        for trial in range(trials):
            seed = derive_seed(master_seed, n, trial)
            instance = _instance_for(n, seed, 1.0)
            try:
                per_n.append(pareto_frontier(instance).total_labels)
            except FrontierCapError:
                cap_errors += 1
        counts.append(tuple(per_n))
        medians.append(float(np.median(per_n)) if per_n else float("nan"))
    edges = np.array([n * (n - 1) / 2 for n in n_grid], dtype=float)
    slope = float(np.polyfit(np.log(edges), np.log(medians), 1)[0])
    return FrontierGrowthResult(n_grid=tuple(int(n) for n in n_grid),
                                medians=tuple(medians), slope=slope,
                                counts=tuple(counts), cap_errors=cap_errors)
