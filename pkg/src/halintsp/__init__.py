"""Exact k-neighbour TSP (k <= 3) on Halin graphs by fan contraction."""
from .costs import (
    SCALE,
    CandidatePath,
    CostModel,
    Kind,
    Objective,
    enumerate_candidate_paths,
    qtsp_objective,
    stsp3_objective,
    tour_objective,
    triple_cost,
)
from .errors import *  # noqa: F401,F403
from .generators import gen_halin_of_size, gen_random_halin, gen_wheel
from .halin import (
    ContractionRecord,
    Fan,
    FanPath,
    HalinEmbedding,
    build_embedding,
    contract_fan,
    expand_tour,
    find_fans,
    is_wheel,
    validate,
)
from .instance_io import Instance, read_instance, write_instance
from .oracle import brute_solve, check_consecutiveness, enumerate_hamilton_cycles
from .reduction import (
    Assignment,
    CnfFormula,
    ReductionOutput,
    decode_tour_to_assignment,
    parse_dimacs,
    sat_brute,
    sat_to_rqtsp,
)
from .slots import Inner, Slot, Traversal
from .solver import (
    PenaltyTable,
    PseudoFanValue,
    Solution,
    base_path_costs,
    beta_update,
    chain_pseudo_fan,
    init_penalties,
    solve,
    solve_stepwise,
    solve_wheel,
)

__version__ = "0.1.0"
