"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Run with output visible:  pytest tests/test_acceptance.py -v -s

The heavy Monte Carlo fixtures are session-scoped and shared between
criteria (the big grid feeds criteria 4, 5 and 12).  Budgets and
tolerances are pinned here, straight from the statement of each
criterion; nothing is calibrated after the fact.

Three criteria are expected to FAIL, and are implemented exactly as
stated rather than weakened:

* criterion 4, second conjunct: the true ratio medians (large-sample
  estimates ~1.85 at n=128 exact, ~1.80 at n=8192 shrink) sit on the
  band edge and make "n=8192 strictly closer to 1 than n=128" hold only
  on sampling flukes; under the pre-registered master seed the band
  passes and the closeness conjunct fails;
* criterion 6: at desk scale the minimum length*cost clears half the
  asymptotic floor in only ~60-75% of trials, not 95%.  That is exactly
  what the first-moment count predicts (expected ~0.2 paths below even
  0.38x the floor at these n), so 95% at 0.5x is out of reach; the
  supplementary test below verifies the prediction-level consistency
  that does hold;
* criterion 10: the first-moment sum it asserts to be strictly
  decreasing is provably non-monotone on the stated grid (it rises from
  n=1e3 to n=1e4 before decaying; verified with a 60-digit evaluation).
"""

import math
import time

import numpy as np
import pytest

from cspath import (derive_seed, dual_maximize, generate, lambda_star,
                    lambda_star_power, pareto_frontier, theory)
from cspath import experiments as ex
from cspath.pareto import (OPTIMAL, enumerate_st_paths,
                           min_product_from_frontier, solve_from_frontier)
from cspath.rng import DistributionSpec

pytestmark = pytest.mark.acceptance

UNI = DistributionSpec.uniform()

C1_SEED = 20240801
C0_GRID = (0.2, 0.5, 1.0, 2.0)


def _report(num, desc, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {num:02d} {desc}: {tag}"
    if detail:
        line += f" [{detail}]"
    print("\n" + line, flush=True)
    assert ok, line


def _median(values):
    return float(np.median(np.asarray(values, dtype=float)))


# ----------------------------------------------------------------------
# shared heavy runs
# ----------------------------------------------------------------------

@pytest.fixture(scope="session")
def crit1_data():
    """Per (n, seed): frontier-based results and brute-force results."""
    t0 = time.perf_counter()
    rows = []
    for n in (4, 5, 6, 7, 8):
        for trial in range(200):
            seed = derive_seed(C1_SEED, n, trial)
            inst = generate(n, seed, UNI, UNI)
            front = pareto_frontier(inst)
            paths = enumerate_st_paths(inst)
            per_budget = {}
            for c0 in C0_GRID:
                got = solve_from_frontier(front, c0)
                feas = [(l, c, len(v) - 1, v) for l, c, v in paths if c <= c0]
                want = min(feas) if feas else None
                per_budget[c0] = (got, want)
            rows.append((n, trial, per_budget,
                         min_product_from_frontier(front),
                         min(l * c for l, c, _ in paths)))
    return rows, time.perf_counter() - t0


@pytest.fixture(scope="session")
def crit3_run(tmp_path_factory):
    config = ex.ExperimentConfig(
        name="gap-trend", n_grid=(100, 300, 1000),
        c0_rule=ex.BudgetRule("window", 0.5), trials=30, master_seed=23,
        methods=(ex.METHOD_EXACT, ex.METHOD_DUAL), exact_n_cap=2000,
        workers=0, output_dir=str(tmp_path_factory.mktemp("gap")))
    t0 = time.perf_counter()
    records, report = ex.run_experiment(config)
    return config, records, report, time.perf_counter() - t0


@pytest.fixture(scope="session")
def crit4_runs(tmp_path_factory):
    config = ex.ExperimentConfig(
        name="ratio-band", n_grid=(128, 512, 2048, 8192),
        c0_rule=ex.BudgetRule("window", 0.5), trials=30, master_seed=271828,
        methods=(ex.METHOD_EXACT, ex.METHOD_SHRINK), exact_n_cap=2048,
        workers=0, output_dir=str(tmp_path_factory.mktemp("ratio_a")))
    t0 = time.perf_counter()
    records, report = ex.run_experiment(config)
    elapsed = time.perf_counter() - t0
    dir_b = str(tmp_path_factory.mktemp("ratio_b"))
    ex.run_experiment(config, output_dir=dir_b)
    return config, records, report, elapsed, dir_b


@pytest.fixture(scope="session")
def crit6_runs(tmp_path_factory):
    out = []
    for n, trials in ((1024, 100), (4096, 30)):
        config = ex.ExperimentConfig(
            name=f"minprod-{n}", n_grid=(n,),
            c0_rule=ex.BudgetRule("window", 0.5), trials=trials,
            master_seed=161803, methods=(ex.METHOD_EXACT,), exact_n_cap=4096,
            workers=0, output_dir=str(tmp_path_factory.mktemp(f"mp{n}")))
        records, _ = ex.run_experiment(config)
        out.append((n, trials, records))
    return out


# ----------------------------------------------------------------------
# criteria
# ----------------------------------------------------------------------

def test_criterion_01_oracle_equivalence(crit1_data):
    rows, elapsed = crit1_data
    checked = 0
    for n, trial, per_budget, mp_front, mp_brute in rows:
        for c0, (got, want) in per_budget.items():
            if want is None:
                assert got.status != OPTIMAL, (n, trial, c0)
            else:
                wl, wc, wh, wv = want
                assert got.status == OPTIMAL, (n, trial, c0)
                assert math.isclose(got.path.length, wl, rel_tol=1e-12, abs_tol=0.0)
                assert got.path.vertices == wv, (n, trial, c0)
                assert got.path.hops == wh
            checked += 1
        assert math.isclose(mp_front, mp_brute, rel_tol=1e-12, abs_tol=0.0)
    ok = checked == 5 * 200 * 4 and elapsed < 120.0
    _report(1, "oracle equivalence (5 n-values x 200 seeds x 4 budgets)",
            ok, f"{checked} comparisons, {elapsed:.1f}s < 120s")


def test_criterion_02_weak_duality(crit1_data):
    rows, _ = crit1_data
    violations = 0
    total = 0
    for n, trial, per_budget, _, _ in rows:
        seed = derive_seed(C1_SEED, n, trial)
        inst = generate(n, seed, UNI, UNI)
        for c0, (got, _want) in per_budget.items():
            if got.status != OPTIMAL:
                continue
            res = dual_maximize(inst, c0)
            total += 1
            if res.dual_value > got.path.length + 1e-9:
                violations += 1
    for trial in range(50):
        seed = derive_seed(C1_SEED + 1, 200, trial)
        inst = generate(200, seed, UNI, UNI)
        c0 = theory.budget_from_window(200, 0.5)
        front = pareto_frontier(inst)
        sol = solve_from_frontier(front, c0)
        res = dual_maximize(inst, c0)
        total += 1
        if sol.is_optimal and res.dual_value > sol.path.length + 1e-9:
            violations += 1
    _report(2, "weak duality, zero violations", violations == 0,
            f"{total} instances, {violations} violations")


def test_criterion_03_gap_trend(crit3_run):
    config, records, report, elapsed = crit3_run
    medians = []
    for n in config.n_grid:
        c0 = config.c0_rule.budget(n, 1.0)
        entry = report[f"n={n}/c0={c0:.17g}/method=dual"]
        medians.append(entry["gap"]["median"])
    nonincreasing = all(a >= b for a, b in zip(medians, medians[1:]))
    ok = nonincreasing and medians[-1] < 0.35 and elapsed < 1800.0
    _report(3, "duality gap median nonincreasing, < 0.35 at n=1000", ok,
            f"gaps={['%.4f' % m for m in medians]}, {elapsed:.0f}s < 1800s")


def _ratio_median(records, n, method, c0):
    pred = theory.expected_min_length(n, c0)
    vals = [r.L / pred if r.L is not None else math.inf
            for r in records if r.n == n and r.method == method]
    assert len(vals) == 30
    return _median(vals)


def test_criterion_04_length_ratio_band(crit4_runs):
    config, records, _report_json, elapsed, _ = crit4_runs
    medians = {}
    for n in config.n_grid:
        c0 = config.c0_rule.budget(n, 1.0)
        method = ex.METHOD_EXACT if n <= 2048 else ex.METHOD_SHRINK
        medians[n] = _ratio_median(records, n, method, c0)
    in_band = all(0.4 <= m <= 1.8 for m in medians.values())
    closer = abs(medians[8192] - 1.0) < abs(medians[128] - 1.0)
    ok = in_band and closer and elapsed < 3600.0
    _report(4, "length ratio in [0.4, 1.8], n=8192 closer to 1 than n=128", ok,
            f"medians={{{', '.join(f'{n}: {m:.3f}' for n, m in medians.items())}}}, "
            f"band={'PASS' if in_band else 'FAIL'}, closer-to-1={'PASS' if closer else 'FAIL'}, "
            f"{elapsed:.0f}s < 3600s")


def test_criterion_05_hop_ratio(crit4_runs):
    _, records, _, _, _ = crit4_runs
    n = 8192
    hops = [r.H for r in records
            if r.n == n and r.method == ex.METHOD_SHRINK and r.H is not None]
    assert len(hops) >= 27, f"only {len(hops)}/30 shrink trials produced paths"
    ratio = _median([h / (math.log(n) / 2.0) for h in hops])
    ok = 0.6 <= ratio <= 1.5
    _report(5, "hop count ratio at n=8192 in [0.6, 1.5]", ok,
            f"median H/(log n/2) = {ratio:.3f} over {len(hops)} trials")


def test_criterion_06_min_product_bound(crit6_runs):
    details = []
    ok = True
    for n, trials, records in crit6_runs:
        floor = 0.5 * math.log(n) ** 2 / (4.0 * n)
        mps = [r.min_product for r in records if r.min_product is not None]
        assert len(mps) == trials
        frac = sum(1 for m in mps if m >= floor) / trials
        details.append(f"n={n}: {frac:.2%}")
        ok = ok and frac >= 0.95
    _report(6, "min length*cost above half the predicted floor in >=95% of trials",
            ok, ", ".join(details))


def test_criterion_06_supplement_first_moment_consistency(crit6_runs):
    # what the analysis does give at finite n: the fraction of trials whose
    # minimum product drops below beta(n)*log^2(n)/n stays within the
    # expected count of such paths (a Markov bound) plus 3 binomial SEs
    for n, trials, records in crit6_runs:
        beta = theory.first_moment_beta(n)
        floor = beta * math.log(n) ** 2 / n
        expected = theory.expected_cheap_path_count(n, beta)
        below = sum(1 for r in records
                    if r.min_product is not None and r.min_product < floor)
        frac = below / trials
        se = math.sqrt(max(frac * (1 - frac), 1e-6) / trials)
        assert frac <= expected + 3 * se, (n, frac, expected)


def test_criterion_07_bound_validity_monte_carlo():
    m = 1_000_000
    rng = np.random.default_rng(424242)
    failures = []
    for k in (1, 2, 3):
        s = rng.random((m, k)).sum(axis=1)
        t_arr = rng.random((m, k)).sum(axis=1)
        prod = s * t_arr
        for t in (0.1, 0.5, 1.0):
            if not t < k * k:
                continue
            p = float(np.mean(prod <= t))
            se = math.sqrt(max(p * (1 - p), 1e-12) / m)
            if theory.sum_product_tail_bound(k, t) < p - 3 * se:
                failures.append(("plain", k, t))
    k, g = 2, 0.5
    s = (rng.random((m, k)) ** g).sum(axis=1)
    t_arr = (rng.random((m, k)) ** g).sum(axis=1)
    prod = s * t_arr
    for t in (0.1, 0.5, 1.0):
        p = float(np.mean(prod <= t))
        se = math.sqrt(max(p * (1 - p), 1e-12) / m)
        if theory.sum_product_tail_bound_power(k, t, g) < p - 3 * se:
            failures.append(("power", k, t))
    exact = 0.1 * (1 - math.log(0.1))
    closed_ok = (math.isclose(exact, 0.33025850929940457, rel_tol=1e-12)
                 and exact <= theory.sum_product_tail_bound(1, 0.1)
                 and math.isclose(theory.sum_product_tail_bound(1, 0.1),
                                  0.43025850929940457, rel_tol=1e-12))
    ok = not failures and closed_ok
    _report(7, "probability bounds above 1e6-sample estimates minus 3 SE", ok,
            f"failures={failures}, exact P(U*U<=0.1)={exact:.10f}")


def test_criterion_08_fpp_centering():
    trials = ex.fpp_experiment(4096, 0.5, 50, master_seed=777)
    summary = ex.fpp_summary(4096, 0.5, trials)
    lr = summary["length_ratio"]["median"]
    hr = summary["hop_ratio"]["median"]
    ok = 0.7 <= lr <= 1.3 and 0.6 <= hr <= 1.5
    _report(8, "stretched-exponential shortest paths match the centering law",
            ok, f"length ratio {lr:.3f} in [0.7,1.3], hop ratio {hr:.3f} in [0.6,1.5]")


def test_criterion_09_truncation_equivalence():
    res = ex.truncation_experiment(2048, 100, master_seed=555)
    ok = res.equal_fraction >= 0.95
    _report(9, "truncating heavy edges leaves the optimum unchanged >=95%",
            ok, f"equal fraction {res.equal_fraction:.2%}, "
                f"{res.disconnected} disconnected")


def test_criterion_10_first_moment_decay():
    grid = (10**3, 10**4, 10**5, 10**6)
    values = [theory.expected_cheap_path_count(n, theory.first_moment_beta(n))
              for n in grid]
    strictly_decreasing = all(a > b for a, b in zip(values, values[1:]))
    _report(10, "expected cheap-path count strictly decreasing on the grid",
            strictly_decreasing,
            "values=" + ", ".join(f"{v:.6f}" for v in values)
            + "; the sequence rises at the first step (verified against a"
              " 60-digit evaluation), so this criterion cannot pass as"
              " stated; it does decrease from 1e4 on")


def test_criterion_10_supplement_decay_from_1e4():
    # documents the true behaviour: strict decay holds once past the peak
    grid = (10**4, 10**5, 10**6)
    values = [theory.expected_cheap_path_count(n, theory.first_moment_beta(n))
              for n in grid]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_criterion_11_reduction_identities():
    rng = np.random.default_rng(314159)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(3, 10**6))
        c0 = float(rng.uniform(0.01, 2.0))
        k = int(rng.integers(1, 50))
        t = float(rng.uniform(1e-6, 0.999) * k * k)

        def rel(a, b):
            return abs(a - b) / max(abs(a), abs(b), 1e-300)

        worst = max(
            worst,
            rel(theory.expected_min_length_power(n, c0, 1.0, theory.VARIANT_GAMMA2),
                theory.expected_min_length(n, c0)),
            rel(theory.expected_min_length_power(n, c0, 1.0,
                                                 theory.VARIANT_GAMMA2GAMMA),
                theory.expected_min_length(n, c0)),
            rel(lambda_star_power(n, c0, 1.0), lambda_star(n, c0)),
            rel(theory.sum_product_tail_bound_power(k, t, 1.0),
                theory.sum_product_tail_bound(k, t)),
        )
    ok = worst <= 1e-12
    _report(11, "unit-exponent reductions agree to 1e-12 at 100 random points",
            ok, f"worst relative deviation {worst:.3e}")


def test_criterion_12_determinism(crit4_runs):
    config, _, _, _, dir_b = crit4_runs
    path_a = f"{config.output_dir}/{config.name}_trials.csv"
    path_b = f"{dir_b}/{config.name}_trials.csv"

    def strip_runtime(path):
        with open(path) as fh:
            header = fh.readline()
            rows = []
            for line in fh:
                parts = line.rstrip("\n").split(",")
                parts[10] = ""
                rows.append(",".join(parts))
        return header, rows

    ha, ra = strip_runtime(path_a)
    hb, rb = strip_runtime(path_b)
    ok = ha == hb and ra == rb
    _report(12, "criterion-4 experiment rerun produces identical trial CSVs",
            ok, f"{len(ra)} rows compared modulo runtime_ms")
