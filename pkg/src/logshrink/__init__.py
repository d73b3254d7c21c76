"""Sparse recovery and matrix completion by iterative thresholding.

The package implements one shared iteration, ``x_{n+1} = T(x_n + A.T @ (y -
A @ x_n))``, for three choices of the scalar operator ``T`` (soft, hard,
log), its singular-value analog for matrix completion, objective and
fixed-point diagnostics, and deterministic seeded benchmark runners.
"""

from .core import (
    DEFAULT_RHO,
    ContractionError,
    MeasurementProblem,
    NumericalError,
    SolverConfig,
    rescale_to_contraction,
    spectral_norm_estimate,
)
from .experiments import (
    ALGORITHMS,
    SVT_ALGORITHMS,
    EnsembleSpec,
    MetricsRow,
    derive_seed,
    exact_recovery,
    gen_completion_problem,
    gen_sparse_problem,
    run_completion_bench,
    run_noiseless_sweep,
    run_noisy_path,
)
from .lowrank import (
    CompletionProblem,
    CompletionTrace,
    complete,
    completion_step,
    nuclear_norm,
    sv_threshold,
    sv_threshold_topk,
)
from .solver import (
    FixedPointReport,
    IterateTrace,
    LambdaSchedule,
    LocalMinReport,
    SolveResult,
    check_delta_condition,
    check_fixed_point,
    check_local_min_condition,
    gradient_step,
    objective_f,
    solve,
    surrogate_Q,
)
from .thresholding import (
    DEFAULT_DELTA,
    DeltaConditionReport,
    ThresholdKind,
    ThresholdRule,
    apply_rule,
    hard_threshold,
    log_threshold,
    params_for_topk,
    scalar_prox_objective,
    soft_threshold,
)

__version__ = "0.1.0"
