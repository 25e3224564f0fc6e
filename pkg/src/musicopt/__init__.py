"""Simulator for decentralized first-order optimization over networks.

Agents connected by an undirected graph cooperatively minimize the sum of
their private smooth strongly convex costs by interleaving local gradient
updates with neighbor combinations.  The package provides the communication
topology tools, two objective families, the classic diffusion baselines, the
multi-update/single-combination schemes (with and without bias correction),
and an experiment harness that measures accuracy against communication and
gradient budgets.

Typical use::

    import musicopt as mo

    prob = mo.synth_uniform(p=10, m=10, n_agents=100, seed=1, mu=1e-6)
    graph = mo.erdos_renyi(100, avg_degree=4, seed=1)
    sched = mo.StepSchedule.constant(1e-4)
    configs = {
        f"E={e}": mo.AlgorithmConfig("inexact_music", sched, E=e)
        for e in (1, 2, 4, 8)
    }
    result = mo.compare(prob, graph, configs, T=20_000,
                        x_star=prob.optimum(), target_error=1e-1)
"""

from .dataio import (
    Dataset,
    LibsvmFormatError,
    Sample,
    binary_filter,
    densify,
    logistic_from_shards,
    parse_libsvm,
    partition,
    quadratic_from_shards,
    serialize_libsvm,
    synth_logistic,
    synth_uniform,
)
from .errors import ConfigError, DivergenceError
from .experiment import (
    ComparisonResult,
    RateEstimate,
    Trace,
    TraceRecord,
    compare,
    export_csv,
    fit_linear_rate,
    plateau_error,
    reached_plateau,
    read_trace_csv,
    relative_error,
    rounds_to_threshold,
    run,
)
from .objectives import (
    ConvexityBounds,
    GdResult,
    LogisticProblem,
    QuadraticProblem,
    centralized_gd_optimum,
    estimate_bounds,
)
from .optimizers import (
    ALGORITHM_KINDS,
    AlgorithmConfig,
    NetworkState,
    StepSchedule,
    advance,
    init_state,
    stability_check,
    step_atc,
    step_dgd,
    step_easgd_like,
    step_exact_diffusion,
    step_exact_music,
    step_inexact_music,
)
from .topology import (
    Graph,
    MixingMatrix,
    erdos_renyi,
    half_identity,
    is_connected,
    metropolis_weights,
    validate_doubly_stochastic,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHM_KINDS",
    "AlgorithmConfig",
    "ComparisonResult",
    "ConfigError",
    "ConvexityBounds",
    "Dataset",
    "DivergenceError",
    "GdResult",
    "Graph",
    "LibsvmFormatError",
    "LogisticProblem",
    "MixingMatrix",
    "NetworkState",
    "QuadraticProblem",
    "RateEstimate",
    "Sample",
    "StepSchedule",
    "Trace",
    "TraceRecord",
    "advance",
    "binary_filter",
    "centralized_gd_optimum",
    "compare",
    "densify",
    "erdos_renyi",
    "estimate_bounds",
    "export_csv",
    "fit_linear_rate",
    "half_identity",
    "init_state",
    "is_connected",
    "logistic_from_shards",
    "metropolis_weights",
    "parse_libsvm",
    "partition",
    "plateau_error",
    "quadratic_from_shards",
    "reached_plateau",
    "read_trace_csv",
    "relative_error",
    "rounds_to_threshold",
    "run",
    "serialize_libsvm",
    "stability_check",
    "step_atc",
    "step_dgd",
    "step_easgd_like",
    "step_exact_diffusion",
    "step_exact_music",
    "step_inexact_music",
    "synth_logistic",
    "synth_uniform",
    "validate_doubly_stochastic",
]
