"""Seeded instance generators, ensemble runners, and recovery metrics.

Every runner is a pure function of its spec: trial t of a sweep draws its
instance from a seed derived from (master_seed, experiment tag, sweep
coordinate, t), and aggregation follows trial order, so output rows are
byte-identical across repeated runs and across any trial-parallel schedule.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_RHO, MeasurementProblem, SolverConfig, as_vector, rescale_to_contraction
from .lowrank import CompletionProblem, complete
from .solver import LambdaSchedule, solve
from .thresholding import DEFAULT_DELTA, ThresholdKind

ALGORITHMS = ("IST", "IHT", "ILT")
SVT_ALGORITHMS = ("soft-SVT", "hard-SVT", "log-SVT")

KIND_BY_ALGORITHM = {
    "IST": ThresholdKind.SOFT,
    "IHT": ThresholdKind.HARD,
    "ILT": ThresholdKind.LOG,
    "soft-SVT": ThresholdKind.SOFT,
    "hard-SVT": ThresholdKind.HARD,
    "log-SVT": ThresholdKind.LOG,
}

# experiment tags, doubling as seed-stream codes
PHASE, PATH, COMPLETION = "phase", "path", "completion"
_SEED_TAG = {PHASE: 1, PATH: 2, COMPLETION: 3}

# Recovery ensembles run the log rule with a smaller smoothing offset than
# the operator-level default: the top-K schedule floors lam at delta**2/2,
# which biases the log fixed point by roughly delta**2/(4|x_i|) per
# coordinate; at delta = 0.01 that bias is comparable to the 1e-3 relative
# recovery tolerance and masks the operator ordering.
DEFAULT_RECOVERY_DELTA = 0.001


@dataclass(frozen=True)
class EnsembleSpec:
    """Dimensions, sweep grid, and trial budget for a recovery ensemble."""

    M: int = 100
    N: int = 200
    K_grid: tuple[int, ...] = (10, 20, 30, 40, 50, 60)
    trials: int = 100
    noise_sigma: float = 0.0
    max_iters: int = 250
    master_seed: int = 12345
    algorithms: tuple[str, ...] = ALGORITHMS
    delta: float = DEFAULT_RECOVERY_DELTA

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("M and N must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if any(k >= self.N for k in self.K_grid):
            raise ValueError("K_grid values must be below N")
        if any(k < 0 for k in self.K_grid):
            raise ValueError("K_grid values must be nonnegative")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")


@dataclass(frozen=True)
class MetricsRow:
    """One CSV-serializable ensemble measurement."""

    experiment: str
    algorithm: str
    sweep_coord: float
    trials: int
    value_kind: str  # avg_error | recovery_prob | avg_residual_sq | avg_frob_error
    value: float


def derive_seed(master_seed: int, experiment: str, coord: int, trial: int) -> int:
    """Deterministic per-trial seed; independent of execution order."""
    ss = np.random.SeedSequence((master_seed, _SEED_TAG[experiment], coord, trial))
    return int(ss.generate_state(1, np.uint64)[0])


def gen_sparse_problem(M: int, N: int, K: int, noise_sigma: float, seed: int,
                       rho: float = DEFAULT_RHO) -> MeasurementProblem:
    """Gaussian sensing instance, rescaled to a contraction.

    Draw order is fixed (matrix entries, support, amplitudes, noise) so a
    seed pins the instance bit-for-bit.  The matrix is standard normal then
    rescaled to spectral norm ``rho``; the K-sparse ground truth has a
    uniformly random support with standard normal amplitudes; noise is
    added per measurement entry after the rescaling.
    """
    if K > N:
        raise ValueError("K must not exceed N")
    rng = np.random.default_rng(seed)
    A_raw = rng.standard_normal((M, N))
    A, _, c = rescale_to_contraction(A_raw, np.zeros(M), rho)
    x_true = np.zeros(N)
    if K > 0:
        support = rng.choice(N, size=K, replace=False)
        x_true[support] = rng.standard_normal(K)
    y = A @ x_true
    if noise_sigma > 0:
        y = y + noise_sigma * rng.standard_normal(M)
    return MeasurementProblem(A=A, y=y, x_true=x_true, noise_sigma=noise_sigma,
                              seed=seed, scale_applied=c)


def gen_completion_problem(N: int, rank: int, obs_frac: float,
                           seed: int) -> CompletionProblem:
    """Rank-``rank`` Gaussian factor matrix with a uniform observed set."""
    if rank < 1 or rank > N:
        raise ValueError("rank must lie in [1, N]")
    if not 0.0 < obs_frac <= 1.0:
        raise ValueError("obs_frac must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    G1 = rng.standard_normal((N, rank))
    G2 = rng.standard_normal((N, rank))
    X = G1 @ G2.T
    m = math.ceil(obs_frac * N * N)
    flat = np.sort(rng.choice(N * N, size=m, replace=False))
    rows, cols = np.divmod(flat, N)
    return CompletionProblem(
        n_rows=N, n_cols=N,
        omega_rows=rows, omega_cols=cols,
        observed=X[rows, cols],
        rank_target=rank, x_true=X, seed=seed,
    )


def exact_recovery(x_hat, x_star, rel_tol: float = 1e-3) -> bool:
    """Support equality plus relative l2 error within ``rel_tol``."""
    x_hat = as_vector(x_hat, "x_hat")
    x_star = as_vector(x_star, "x_star")
    if x_hat.shape != x_star.shape:
        raise ValueError("x_hat and x_star must have equal length")
    norm_star = float(np.linalg.norm(x_star))
    if norm_star == 0.0:
        return not np.any(x_hat)
    if not np.array_equal(x_hat != 0.0, x_star != 0.0):
        return False
    return float(np.linalg.norm(x_hat - x_star)) <= rel_tol * norm_star


def resolve_threads(threads: int) -> int:
    """0 means auto (one worker per CPU)."""
    if threads < 0:
        raise ValueError("threads must be nonnegative")
    return threads if threads > 0 else (os.cpu_count() or 1)


def _map_trials(fn, trials: int, threads: int) -> list:
    """Run fn(0..trials-1), results in trial order regardless of schedule."""
    workers = resolve_threads(threads)
    if workers == 1 or trials <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, range(trials)))


def run_noiseless_sweep(spec: EnsembleSpec, threads: int = 1) -> list[MetricsRow]:
    """Recovery probability and average error per (K, algorithm) cell.

    Each trial draws one noiseless instance that all algorithms solve with
    the top-K schedule (K known to the solver), for ``spec.max_iters``
    iterations.
    """
    if spec.noise_sigma != 0:
        raise ValueError("noiseless sweep requires noise_sigma = 0")
    config = SolverConfig(max_iters=spec.max_iters)
    rows: list[MetricsRow] = []
    for K in spec.K_grid:
        schedule = LambdaSchedule.top_k(K, spec.delta)

        def one_trial(t: int, K=K, schedule=schedule):
            seed = derive_seed(spec.master_seed, PHASE, K, t)
            problem = gen_sparse_problem(spec.M, spec.N, K, 0.0, seed)
            out = []
            for alg in spec.algorithms:
                result = solve(problem, KIND_BY_ALGORITHM[alg], schedule, config)
                err = float(np.linalg.norm(result.x_hat - problem.x_true))
                out.append((err, exact_recovery(result.x_hat, problem.x_true)))
            return out

        per_trial = _map_trials(one_trial, spec.trials, threads)
        for i, alg in enumerate(spec.algorithms):
            errs = np.array([trial[i][0] for trial in per_trial])
            recs = np.array([trial[i][1] for trial in per_trial], dtype=float)
            rows.append(MetricsRow(PHASE, alg, float(K), spec.trials,
                                   "avg_error", float(np.mean(errs))))
            rows.append(MetricsRow(PHASE, alg, float(K), spec.trials,
                                   "recovery_prob", float(np.mean(recs))))
    return rows


def run_noisy_path(spec: EnsembleSpec, K_true: int, k_grid,
                   threads: int = 1) -> list[MetricsRow]:
    """Average squared residual along the sparsity path.

    Draws ``spec.trials`` noisy instances with ``K_true`` nonzeros, then
    solves every one at each enforced sparsity level k in ``k_grid`` (top-K
    schedule with K = k), per algorithm.
    """
    if spec.noise_sigma <= 0:
        raise ValueError("noisy path requires noise_sigma > 0")
    k_grid = [int(k) for k in k_grid]
    if any(k < 0 or k >= spec.N for k in k_grid):
        raise ValueError("k_grid values must lie in [0, N)")
    config = SolverConfig(max_iters=spec.max_iters)

    def one_trial(t: int):
        seed = derive_seed(spec.master_seed, PATH, 0, t)
        problem = gen_sparse_problem(spec.M, spec.N, K_true, spec.noise_sigma, seed)
        out = np.empty((len(k_grid), len(spec.algorithms)))
        for i, k in enumerate(k_grid):
            schedule = LambdaSchedule.top_k(k, spec.delta)
            for j, alg in enumerate(spec.algorithms):
                result = solve(problem, KIND_BY_ALGORITHM[alg], schedule, config)
                out[i, j] = result.trace.residual_sq[-1]
        return out

    per_trial = _map_trials(one_trial, spec.trials, threads)
    stacked = np.stack(per_trial)  # trials x k x algorithm
    rows: list[MetricsRow] = []
    for i, k in enumerate(k_grid):
        for j, alg in enumerate(spec.algorithms):
            rows.append(MetricsRow(PATH, alg, float(k), spec.trials,
                                   "avg_residual_sq", float(np.mean(stacked[:, i, j]))))
    return rows


def run_completion_bench(N: int, rank: int, obs_frac: float, trials: int,
                         max_iters: int, master_seed: int,
                         delta: float = DEFAULT_DELTA,
                         threads: int = 1) -> list[MetricsRow]:
    """Average Frobenius error per iteration for the three spectral rules.

    Iteration index 0 is the shared masked-data start, so its row is
    identical across algorithms; ``max_iters`` rows are emitted per
    algorithm.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    config = SolverConfig(max_iters=max(max_iters - 1, 1), step_tol=0.0)

    def one_trial(t: int):
        seed = derive_seed(master_seed, COMPLETION, 0, t)
        problem = gen_completion_problem(N, rank, obs_frac, seed)
        curves = []
        for alg in SVT_ALGORITHMS:
            _, trace = complete(problem, KIND_BY_ALGORITHM[alg], config, delta)
            curves.append(trace.frob_error[:max_iters])
        return np.stack(curves)

    per_trial = _map_trials(one_trial, trials, threads)
    mean_curves = np.mean(np.stack(per_trial), axis=0)  # algorithm x iteration
    rows: list[MetricsRow] = []
    for j, alg in enumerate(SVT_ALGORITHMS):
        for i in range(mean_curves.shape[1]):
            rows.append(MetricsRow(COMPLETION, alg, float(i), trials,
                                   "avg_frob_error", float(mean_curves[j, i])))
    return rows
