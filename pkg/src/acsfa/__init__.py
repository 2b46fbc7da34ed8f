"""Symmetric-TSP solving with an ant colony system, a self-tuning hybrid,
exact oracles, and a benchmark/statistics pipeline."""

from .acs import (
    AcsParams,
    RunRecord,
    compute_tau0,
    construct_tour,
    global_update,
    heuristic_matrix,
    init_pheromone,
    local_update,
    nearest_neighbor_tour,
    run_acs,
    select_next_city,
    transition_probabilities,
)
from .bench import (
    KNOWN_OPTIMA,
    ExperimentConfig,
    ExperimentResult,
    ExperimentSummary,
    best_length_matrix,
    export,
    load_config,
    parse_config,
    run_experiment,
)
from .exact import brute_force, held_karp
from .firefly import (
    PARAM_NAMES,
    FaState,
    ParamBounds,
    ParamVector,
    attractiveness,
    firefly_step,
    move,
    param_distance,
    reduce_alpha,
    sweep,
)
from .hybrid import HybridConfig, ParameterTrace, brightness, init_population, run_acsfa
from .stats import (
    AnovaTable,
    ResponseMatrix,
    TukeyGrouping,
    error_matrix,
    f_upper_tail,
    rcbd_anova,
    read_response_matrix,
    studentized_range_cdf,
    studentized_range_quantile,
    tukey_hsd,
    write_response_matrix,
)
from .tsplib import (
    Tour,
    TspInstance,
    TsplibParseError,
    distance,
    format_instance,
    parse_instance,
    tour_length,
)

__version__ = "0.1.0"

__all__ = [
    "AcsParams",
    "AnovaTable",
    "ExperimentConfig",
    "ExperimentResult",
    "ExperimentSummary",
    "FaState",
    "HybridConfig",
    "KNOWN_OPTIMA",
    "PARAM_NAMES",
    "ParamBounds",
    "ParamVector",
    "ParameterTrace",
    "ResponseMatrix",
    "RunRecord",
    "Tour",
    "TspInstance",
    "TsplibParseError",
    "TukeyGrouping",
    "attractiveness",
    "best_length_matrix",
    "brightness",
    "brute_force",
    "compute_tau0",
    "construct_tour",
    "distance",
    "error_matrix",
    "export",
    "f_upper_tail",
    "firefly_step",
    "format_instance",
    "global_update",
    "held_karp",
    "heuristic_matrix",
    "init_pheromone",
    "init_population",
    "load_config",
    "local_update",
    "move",
    "nearest_neighbor_tour",
    "param_distance",
    "parse_config",
    "parse_instance",
    "rcbd_anova",
    "read_response_matrix",
    "reduce_alpha",
    "run_acs",
    "run_acsfa",
    "run_experiment",
    "select_next_city",
    "studentized_range_cdf",
    "studentized_range_quantile",
    "sweep",
    "tour_length",
    "transition_probabilities",
    "tukey_hsd",
    "write_response_matrix",
]
