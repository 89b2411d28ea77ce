"""Hybrid genetic search for the job sequencing and tool switching problem."""

from .evaluation import (
    Evaluation,
    LoadedPlan,
    count_switches,
    evaluate,
    fast_evaluate,
    ktns_decode,
    tie_break_objective,
)
from .genetic import (
    HgsParams,
    HybridGeneticSearch,
    Population,
    SolveReport,
    binary_tournament,
    broken_pairs_distance,
    compute_biased_fitness,
    ox_crossover,
    run_hgs,
    select_survivors,
)
from .instance import (
    Instance,
    InstanceFormatError,
    generate_instance,
    parse_instance,
    read_instance,
    serialize_instance,
    write_instance,
)
from .local_search import Move, apply_move, descend_neighborhood, local_search
from .oracle import exact_best_sequence, exact_min_loading

__all__ = [
    "Evaluation",
    "LoadedPlan",
    "count_switches",
    "evaluate",
    "fast_evaluate",
    "ktns_decode",
    "tie_break_objective",
    "HgsParams",
    "HybridGeneticSearch",
    "Population",
    "SolveReport",
    "binary_tournament",
    "broken_pairs_distance",
    "compute_biased_fitness",
    "ox_crossover",
    "run_hgs",
    "select_survivors",
    "Instance",
    "InstanceFormatError",
    "generate_instance",
    "parse_instance",
    "read_instance",
    "serialize_instance",
    "write_instance",
    "Move",
    "apply_move",
    "descend_neighborhood",
    "local_search",
    "exact_best_sequence",
    "exact_min_loading",
]

__version__ = "0.1.0"
