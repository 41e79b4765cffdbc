"""Branch and bound for trade-off-bounded Pareto optimal solutions.

Approximates the subset of a problem's Pareto optimal set whose
trade-offs are bounded (epsilon-properly Pareto optimal solutions) by
bisecting the decision space, bounding each box with Lipschitz
constants, and discarding boxes whose lower bounds are dominated under
a widened polyhedral ordering cone.
"""

__version__ = "0.1.0"

from .benchmarks import available_problems, get_problem, register_problem
from .bounding import (
    BoundRecord,
    feasibility_test,
    lipschitz_lower_bound,
    midpoint_upper_bound,
)
from .cone import (
    apply_t_eps,
    eps_dominates,
    filter_non_eps_dominated,
    pareto_dominates,
)
from .errors import PpbnbError
from .estimator import NotFittedError, ProperParetoSolver
from .expressions import load_problem_file
from .geometry import Box, bisect, diameter, midpoint
from .io import RunConfig, emit_plot_data, export_results, parse_config
from .moea import MiniMoeaConfig, run_mini_moea
from .oracle import GridOracle, build_grid_oracle, oracle_proper_front
from .problems import (
    ProblemDefinition,
    ReferencePoints,
    estimate_lipschitz,
    evaluate,
    normalize,
    update_reference_points,
)
from .solver import (
    RunResult,
    SolverConfig,
    check_eps_efficient,
    directed_hausdorff,
    discarding_pass,
    hausdorff,
    mark_protected,
    solve,
)

__all__ = [
    "Box",
    "BoundRecord",
    "GridOracle",
    "MiniMoeaConfig",
    "NotFittedError",
    "PpbnbError",
    "ProblemDefinition",
    "ProperParetoSolver",
    "ReferencePoints",
    "RunConfig",
    "RunResult",
    "SolverConfig",
    "apply_t_eps",
    "available_problems",
    "bisect",
    "build_grid_oracle",
    "check_eps_efficient",
    "diameter",
    "directed_hausdorff",
    "discarding_pass",
    "emit_plot_data",
    "eps_dominates",
    "estimate_lipschitz",
    "evaluate",
    "export_results",
    "feasibility_test",
    "filter_non_eps_dominated",
    "get_problem",
    "hausdorff",
    "lipschitz_lower_bound",
    "load_problem_file",
    "mark_protected",
    "midpoint",
    "midpoint_upper_bound",
    "normalize",
    "oracle_proper_front",
    "pareto_dominates",
    "parse_config",
    "register_problem",
    "run_mini_moea",
    "solve",
    "update_reference_points",
]
