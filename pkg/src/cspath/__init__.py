"""Budget-constrained shortest paths on randomly weighted complete graphs.

Seeded instances, an exact Pareto-frontier solver with a brute-force
oracle, Lagrangian-dual machinery, closed-form asymptotic predictions,
and a Monte Carlo experiment harness comparing the two.
"""

__version__ = "0.1.0"

from ._backend import USING_NUMBA, backend_name
from .dual import (DualResult, ShrinkSolution, budget_shrink_solve,
                   dual_maximize, lambda_star, lambda_star_power,
                   relaxed_shortest_path, shortest_length_path)
from .errors import (CspathError, DisconnectedError, EdgeCapError,
                     FormatError, FrontierCapError)
from .instance import (Instance, PathResult, from_arrays, generate,
                       read_instance, write_instance)
from .pareto import (CspSolution, ParetoFrontier, brute_force_csp,
                     brute_force_frontier, brute_force_min_product,
                     min_product, pareto_frontier, solve_csp)
from .rng import COST, LENGTH, DistributionSpec, derive_seed, edge_weight

__all__ = [
    "USING_NUMBA", "backend_name", "__version__",
    "DistributionSpec", "LENGTH", "COST", "edge_weight", "derive_seed",
    "Instance", "PathResult", "generate", "from_arrays",
    "read_instance", "write_instance",
    "ParetoFrontier", "CspSolution", "pareto_frontier", "solve_csp",
    "min_product", "brute_force_csp", "brute_force_frontier",
    "brute_force_min_product",
    "DualResult", "ShrinkSolution", "relaxed_shortest_path",
    "shortest_length_path", "lambda_star", "lambda_star_power",
    "dual_maximize", "budget_shrink_solve",
    "CspathError", "FormatError", "EdgeCapError", "FrontierCapError",
    "DisconnectedError",
]
