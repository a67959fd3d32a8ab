from .bipartite import (
    Bipartite,
    MoreThanOne,
    OneEdge,
    PartitionError,
    bipartite_partition,
    check_ab,
    derive_ab_partition,
    detect_min_uncut_le1,
    solve_min_uncut_le1,
    solve_near_bipartite,
)
from .portfolio import STRATEGIES, Caps, SolveResult, solve
from .search import (
    CapExceeded,
    PreconditionError,
    build_twosat,
    classify_trees,
    solve_bruteforce_orientations,
    solve_bruteforce_rootings,
    solve_parameterized,
    solve_small_cores,
    tree_diameter,
)
from .twosat import TwoSatFormula, truth_table_solve, twosat_solve

__all__ = [
    "Bipartite",
    "Caps",
    "CapExceeded",
    "MoreThanOne",
    "OneEdge",
    "PartitionError",
    "PreconditionError",
    "STRATEGIES",
    "SolveResult",
    "TwoSatFormula",
    "bipartite_partition",
    "build_twosat",
    "check_ab",
    "classify_trees",
    "derive_ab_partition",
    "detect_min_uncut_le1",
    "solve",
    "solve_bruteforce_orientations",
    "solve_bruteforce_rootings",
    "solve_min_uncut_le1",
    "solve_near_bipartite",
    "solve_parameterized",
    "solve_small_cores",
    "tree_diameter",
    "truth_table_solve",
    "twosat_solve",
]
