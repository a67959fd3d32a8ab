from .mis import (
    CrossedOneEdgesWithZeros,
    FractionalEdge,
    GadgetChoice,
    MisError,
    MisInstance,
    MisMapping,
    TwoOneEdges,
    extract_mis,
    from_mis,
    from_mis_big_cores,
    mis_bruteforce,
)
from .random_gen import GeneratorError, gen_random
from .sat import (
    CnfError,
    MonotoneCnf,
    SatMapping,
    assignment_to_rooting,
    from_monotone_3sat,
    map_solution_sat,
    reduce_3sat_low_degree,
    truth_table,
)

__all__ = [
    "CnfError",
    "CrossedOneEdgesWithZeros",
    "FractionalEdge",
    "GadgetChoice",
    "GeneratorError",
    "MisError",
    "MisInstance",
    "MisMapping",
    "MonotoneCnf",
    "SatMapping",
    "TwoOneEdges",
    "assignment_to_rooting",
    "extract_mis",
    "from_mis",
    "from_mis_big_cores",
    "from_monotone_3sat",
    "gen_random",
    "map_solution_sat",
    "mis_bruteforce",
    "reduce_3sat_low_degree",
    "truth_table",
]
