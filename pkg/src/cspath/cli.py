"""Command-line interface.

Machine output (key=value lines or JSON) goes to stdout; the resolved
configuration of every run and all diagnostics go to stderr, so output
can be piped.  Exit codes: 0 success, 1 usage error, 2 solver or
resource error, 3 infeasible (solve only).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict

from . import __version__, experiments, theory
from ._backend import backend_name
from .dual import dual_maximize, budget_shrink_solve, relaxed_shortest_path
from .errors import CspathError
from .instance import generate, read_instance, write_instance
from .pareto import solve_csp
from .rng import DistributionSpec

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ERROR = 2
EXIT_INFEASIBLE = 3


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 on usage errors (argparse default is 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cspath", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ldist", default="uniform")
    p.add_argument("--cdist", default="uniform")
    p.add_argument("--out", required=True)
    p.add_argument("--implicit", action="store_true",
                   help="write a header-only file instead of edge tables")

    p = sub.add_parser("solve", help="solve one instance under a budget")
    p.add_argument("--instance", help="instance file path")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--ldist", default="uniform")
    p.add_argument("--cdist", default="uniform")
    p.add_argument("--c0", type=float, required=True)
    p.add_argument("--method", default="exact",
                   choices=["exact", "dual", "shrink", "all"])
    p.add_argument("--json", action="store_true")
    p.add_argument("--verify", action="store_true",
                   help="recompute path sums from the instance and fail loudly")

    p = sub.add_parser("dual", help="dual bound / single relaxation value")
    p.add_argument("--instance")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--ldist", default="uniform")
    p.add_argument("--cdist", default="uniform")
    p.add_argument("--c0", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="evaluate the relaxation at this multiplier only")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("theory", help="closed-form predictions for (n, c0)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c0", type=float, required=True)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--variant", default="both",
                   choices=["both", theory.VARIANT_GAMMA2,
                            theory.VARIANT_GAMMA2GAMMA])

    p = sub.add_parser("experiment", help="run a configured Monte Carlo grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None,
                   help="override the config's output_dir")

    p = sub.add_parser("bh", help="shortest paths under (exponential)^s weights")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("trunc", help="truncation equivalence experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threshold", type=float, default=None)

    p = sub.add_parser("frontier", help="Pareto frontier growth experiment")
    p.add_argument("--ngrid", required=True,
                   help="comma-separated list of n values")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    return parser


def _echo_config(args) -> None:
    resolved = {k: v for k, v in sorted(vars(args).items()) if k != "command"}
    resolved["backend"] = backend_name()
    resolved["version"] = __version__
    print(f"resolved-config[{args.command}]: "
          + json.dumps(resolved, default=str, sort_keys=True), file=sys.stderr)


def _load_instance(args):
    if args.instance is not None:
        if args.n is not None or args.seed is not None:
            raise SystemExit(_usage("--instance excludes --n/--seed"))
        return read_instance(args.instance)
    if args.n is None or args.seed is None:
        raise SystemExit(_usage("need --instance or both --n and --seed"))
    return generate(args.n, args.seed, DistributionSpec.parse(args.ldist),
                    DistributionSpec.parse(args.cdist), storage="implicit")


def _usage(message: str) -> int:
    print(f"cspath: error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _path_dict(path) -> dict:
    return {"vertices": list(path.vertices), "length": path.length,
            "cost": path.cost, "hops": path.hops}


def _print_kv(prefix: str, mapping: dict) -> None:
    for key, value in mapping.items():
        if isinstance(value, float):
            print(f"{prefix}{key}={value:.17g}")
        elif isinstance(value, list):
            print(f"{prefix}{key}={','.join(str(v) for v in value)}")
        else:
            print(f"{prefix}{key}={value}")


def _cmd_gen(args) -> int:
    instance = generate(args.n, args.seed, DistributionSpec.parse(args.ldist),
                        DistributionSpec.parse(args.cdist),
                        storage="implicit" if args.implicit else "materialized")
    write_instance(instance, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    instance = _load_instance(args)
    methods = ["exact", "dual", "shrink"] if args.method == "all" else [args.method]
    results: dict = {}
    paths = {}
    for method in methods:
        if method == "exact":
            sol = solve_csp(instance, args.c0)
            block = {"status": sol.status}
            if sol.path is not None:
                block.update(L=sol.path.length, cost=sol.path.cost,
                             H=sol.path.hops, path=list(sol.path.vertices))
                paths[method] = sol.path
            st = sol.frontier_stats
            block.update(total_labels=st.total_labels,
                         max_labels_per_node=st.max_labels_per_node,
                         labels_at_target=st.labels_at_target)
        elif method == "dual":
            res = dual_maximize(instance, args.c0)
            block = {"status": "optimal", "lambda": res.lam,
                     "relaxed_value": res.relaxed_value,
                     "dual_value": res.dual_value,
                     "iterations": res.iterations,
                     "L": res.path.length, "cost": res.path.cost,
                     "H": res.path.hops, "path": list(res.path.vertices)}
            paths[method] = res.path
        else:
            res = budget_shrink_solve(instance, args.c0)
            block = {"status": res.status, "lambda": res.lam,
                     "delta": res.delta, "relax_calls": res.relax_calls}
            if res.path is not None:
                block.update(L=res.path.length, cost=res.path.cost,
                             H=res.path.hops, path=list(res.path.vertices))
                paths[method] = res.path
        results[method] = block

    if args.verify:
        for method, path in paths.items():
            path.verify(instance)
        print(f"verify: {len(paths)} path(s) recomputed from the instance OK",
              file=sys.stderr)

    if args.json:
        print(json.dumps({"version": __version__,
                          "params": {"n": instance.n, "seed": instance.seed,
                                     "ldist": instance.length_dist.format(),
                                     "cdist": instance.cost_dist.format(),
                                     "c0": args.c0, "method": args.method},
                          "results": results}, sort_keys=True))
    else:
        for method, block in results.items():
            _print_kv(f"{method}.", block)

    if "exact" in results:
        return EXIT_OK if results["exact"]["status"] == "optimal" else EXIT_INFEASIBLE
    if "shrink" in results:
        return EXIT_OK if results["shrink"]["status"] == "optimal" else EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_dual(args) -> int:
    instance = _load_instance(args)
    if args.lam is not None:
        value, path = relaxed_shortest_path(instance, args.lam)
        block = {"lambda": args.lam, "relaxed_value": value,
                 "L": path.length, "cost": path.cost, "H": path.hops,
                 "path": list(path.vertices)}
    else:
        res = dual_maximize(instance, args.c0, tol=args.tol)
        block = {"lambda": res.lam, "relaxed_value": res.relaxed_value,
                 "dual_value": res.dual_value, "iterations": res.iterations,
                 "L": res.path.length, "cost": res.path.cost,
                 "H": res.path.hops, "path": list(res.path.vertices)}
    if args.json:
        print(json.dumps({"version": __version__, "results": block},
                         sort_keys=True))
    else:
        _print_kv("", block)
    return EXIT_OK


def _cmd_theory(args) -> int:
    out = {"n": args.n, "c0": args.c0, "gamma": args.gamma}
    variants = ([theory.VARIANT_GAMMA2, theory.VARIANT_GAMMA2GAMMA]
                if args.variant == "both" else [args.variant])
    if args.gamma == 1.0:
        out["L_pred"] = theory.expected_min_length(args.n, args.c0)
    else:
        for variant in variants:
            out[f"L_pred_{variant}"] = theory.expected_min_length_power(
                args.n, args.c0, args.gamma, variant)
    out["H_pred"] = theory.expected_hops_power(args.n, args.gamma)
    from .dual import lambda_star_power
    out["lambda_star"] = lambda_star_power(args.n, args.c0, args.gamma)
    lo, hi = theory.budget_window_power(args.n, args.gamma)
    out["window_lo"] = lo
    out["window_hi"] = hi
    out["min_product_bound"] = theory.min_product_bound(args.n, args.gamma)
    beta = theory.first_moment_beta(args.n)
    out["first_moment_beta"] = beta
    out["expected_cheap_path_count"] = theory.expected_cheap_path_count(args.n, beta)
    _print_kv("", out)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    config = experiments.read_config(args.config)
    _records, report = experiments.run_experiment(config, output_dir=args.out)
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_bh(args) -> int:
    trials = experiments.fpp_experiment(args.n, args.s, args.trials, args.seed)
    print(json.dumps({
        "version": __version__,
        "params": {"n": args.n, "s": args.s, "trials": args.trials,
                   "seed": args.seed},
        "trials": [asdict(t) for t in trials],
        "summary": experiments.fpp_summary(args.n, args.s, trials),
    }, sort_keys=True))
    return EXIT_OK


def _cmd_trunc(args) -> int:
    res = experiments.truncation_experiment(args.n, args.trials, args.seed,
                                            threshold=args.threshold)
    print(json.dumps({"version": __version__,
                      "params": {"n": args.n, "trials": args.trials,
                                 "seed": args.seed},
                      "threshold": res.threshold,
                      "equal": res.equal,
                      "disconnected": res.disconnected,
                      "equal_fraction": res.equal_fraction}, sort_keys=True))
    return EXIT_OK


def _cmd_frontier(args) -> int:
    try:
        n_grid = [int(x) for x in args.ngrid.split(",")]
    except ValueError:
        return _usage(f"bad --ngrid {args.ngrid!r}")
    res = experiments.frontier_growth_experiment(n_grid, args.trials, args.seed)
    print(json.dumps({"version": __version__,
                      "params": {"ngrid": n_grid, "trials": args.trials,
                                 "seed": args.seed},
                      "medians": list(res.medians),
                      "counts": [list(c) for c in res.counts],
                      "slope": res.slope,
                      "cap_errors": res.cap_errors}, sort_keys=True))
    return EXIT_OK


_HANDLERS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "dual": _cmd_dual,
    "theory": _cmd_theory,
    "experiment": _cmd_experiment,
    "bh": _cmd_bh,
    "trunc": _cmd_trunc,
    "frontier": _cmd_frontier,
}


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    _echo_config(args)
    try:
        code = _HANDLERS[args.command](args)
    except SystemExit:
        raise
    except CspathError as exc:
        print(f"cspath: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError, RuntimeError, AssertionError) as exc:
        print(f"cspath: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return code


if __name__ == "__main__":
    sys.exit(main())
