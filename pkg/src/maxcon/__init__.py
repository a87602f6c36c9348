"""Maximum consensus (MAXCON) robust fitting: exact solvers, Chebyshev fits,
hardness-reduction generators and a command-line harness."""

from .core import (
    EXACT,
    FLOAT,
    DataPoint,
    FitResult,
    InputError,
    Instance,
    SolveStats,
    consensus,
    fit_result,
    kos_objective,
    residual,
    residuals,
)
from .minimax import MinimaxSolution, refit, solve_basis_analytic, solve_minimax
from .solvers import (
    SolverConfig,
    SolverRefusal,
    brute_force_oracle,
    enumerate_exact,
    fpt_solve,
    grouped_search,
    ransac_baseline,
    solve,
)
from .reductions import (
    Graph,
    ReductionCertificate,
    SlabInstance,
    TwoSatFormula,
    clique_to_maxcon,
    decode_assignment,
    decode_clique,
    twosat_to_maxcon,
    verify_reduction,
)
from .formats import ParseError, parse_cnf2, parse_graph, parse_instance, write_instance
from .generate import generate_random

__version__ = "0.1.0"
