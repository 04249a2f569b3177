"""Federated surrogate-assisted evolutionary optimization.

Simulates a server and a population of clients that jointly optimize an
expensive black-box benchmark: clients fit RBFN surrogates on private
archives, the server aggregates them by sorted averaging and searches a
federated lower-confidence-bound acquisition function with a real-coded
genetic algorithm.
"""

from .acquisition import AcquisitionContext, f_lcb, g_lcb, l_lcb
from .aggregation import client_weights, index_average, matching_metric, sorted_average
from .benchmarks import (
    Bounds,
    NoiseSpec,
    ProblemId,
    bounds,
    evaluate,
    evaluate_noisy,
    is_feasible,
    optimum_point,
)
from .config import ExperimentConfig, default_ga_config
from .evolution import GaConfig, OptimizerError, minimize, polynomial_mutation, sbx_crossover, tournament_select
from .federation import (
    ClientState,
    RoundRecord,
    RunTrace,
    ServerState,
    Upload,
    assert_no_client_data,
    initialize,
    run_optimization,
    run_round,
    select_participants,
)
from .harness import (
    ExperimentSummary,
    emit_summary,
    emit_trace,
    mean_best_curve,
    parse_summary,
    render_plot,
    run_experiment,
)
from .sampling import latin_hypercube, spawn_stream
from .surrogate import (
    Dataset,
    RbfnParams,
    TrainingDivergenceError,
    compute_spreads,
    from_flat,
    init_surrogate,
    kmeans,
    mse_gradients,
    mse_loss,
    predict,
    predict_many,
    to_flat,
    train,
)

__version__ = "0.1.0"
