"""Singular-value thresholding and top-K alternating matrix completion.

A matrix analog of the vector solvers: apply a scalar thresholding operator
to the singular value spectrum and reconstruct.  The completion loop
alternates exact data replacement on the observed entries with a top-K
spectral thresholding step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import NumericalError, SolverConfig, as_matrix, _frozen_copy
from .thresholding import (
    DEFAULT_DELTA,
    ThresholdKind,
    ThresholdRule,
    hard_threshold,
    log_threshold,
    params_for_topk,
    soft_threshold,
)

RANK_TOL = 1e-9  # sigma_i <= RANK_TOL * sigma_max counts as zero


@dataclass(frozen=True)
class CompletionProblem:
    """Recover a low-rank matrix from the entries listed in omega.

    ``omega_rows``/``omega_cols`` are aligned index arrays; ``observed``
    holds the corresponding values.  ``rank_target`` is the K used by the
    top-K spectral thresholding step.
    """

    n_rows: int
    n_cols: int
    omega_rows: np.ndarray
    omega_cols: np.ndarray
    observed: np.ndarray
    rank_target: int
    x_true: np.ndarray | None = None
    seed: int = 0

    def __post_init__(self):
        rows = np.asarray(self.omega_rows, dtype=int)
        cols = np.asarray(self.omega_cols, dtype=int)
        obs = np.asarray(self.observed, dtype=float)
        if not (rows.shape == cols.shape == obs.shape) or rows.ndim != 1:
            raise ValueError("omega index arrays and observed values must be aligned 1-D")
        if rows.size:
            if rows.min() < 0 or rows.max() >= self.n_rows:
                raise ValueError("omega row index out of range")
            if cols.min() < 0 or cols.max() >= self.n_cols:
                raise ValueError("omega column index out of range")
            flat = rows * self.n_cols + cols
            if np.unique(flat).size != flat.size:
                raise ValueError("omega contains duplicate entries")
        if not np.all(np.isfinite(obs)):
            raise ValueError("observed values contain non-finite entries")
        if self.rank_target < 1:
            raise ValueError("rank_target must be >= 1")
        if self.x_true is not None:
            xt = as_matrix(self.x_true, "x_true")
            if xt.shape != (self.n_rows, self.n_cols):
                raise ValueError("x_true shape mismatch")
            object.__setattr__(self, "x_true", _frozen_copy(xt))
        for name, arr in (("omega_rows", rows), ("omega_cols", cols), ("observed", obs)):
            object.__setattr__(self, name, _frozen_copy(arr))

    @property
    def n_observed(self) -> int:
        return self.observed.shape[0]

    def masked_data(self) -> np.ndarray:
        """Dense matrix with observed values on omega and zeros elsewhere."""
        X = np.zeros((self.n_rows, self.n_cols))
        X[self.omega_rows, self.omega_cols] = self.observed
        return X


@dataclass(frozen=True)
class CompletionTrace:
    """Per-iteration history; index 0 is the initial masked-data state."""

    frob_error: np.ndarray | None
    observed_residual: np.ndarray
    rank: np.ndarray

    def __len__(self) -> int:
        return self.observed_residual.shape[0]


def nuclear_norm(X) -> float:
    """Sum of singular values."""
    X = as_matrix(X, "X")
    return float(np.sum(np.linalg.svd(X, compute_uv=False)))


def _threshold_spectrum(sigma: np.ndarray, rule: ThresholdRule) -> np.ndarray:
    # singular values are nonnegative, so only the positive branch fires
    if rule.kind is ThresholdKind.SOFT:
        return soft_threshold(sigma, rule.lam)
    if rule.kind is ThresholdKind.HARD:
        return hard_threshold(sigma, rule.lam)
    return log_threshold(sigma, rule.lam, rule.delta)


def sv_threshold(X, rule: ThresholdRule) -> np.ndarray:
    """Apply ``rule`` to the singular value spectrum and reconstruct."""
    X = as_matrix(X, "X")
    try:
        U, sigma, Vt = np.linalg.svd(X, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc
    return (U * _threshold_spectrum(sigma, rule)) @ Vt


def sv_threshold_topk(X, K: int, kind: ThresholdKind,
                      delta: float = DEFAULT_DELTA) -> np.ndarray:
    """Zero all but the K leading singular values via the top-K rule."""
    X = as_matrix(X, "X")
    if K < 1:
        raise ValueError("K must be >= 1")
    try:
        U, sigma, Vt = np.linalg.svd(X, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc
    rule = params_for_topk(sigma, K, kind, delta)
    return (U * _threshold_spectrum(sigma, rule)) @ Vt


def completion_step(X, problem: CompletionProblem) -> np.ndarray:
    """Replace the observed entries of X by their data values.

    Equals a unit gradient step on the observed-entry residual: entries in
    omega become exact, entries off omega are untouched.
    """
    X = as_matrix(X, "X")
    if X.shape != (problem.n_rows, problem.n_cols):
        raise ValueError("X shape does not match the problem")
    out = X.copy()
    out[problem.omega_rows, problem.omega_cols] = problem.observed
    return out


def _numerical_rank(sigma: np.ndarray) -> int:
    if sigma.size == 0 or sigma[0] <= 0.0:
        return 0
    return int(np.count_nonzero(sigma > RANK_TOL * sigma[0]))


def complete(problem: CompletionProblem, kind: ThresholdKind,
             config: SolverConfig = SolverConfig(),
             delta: float = DEFAULT_DELTA) -> tuple[np.ndarray, CompletionTrace]:
    """Alternate data replacement with top-K spectral thresholding.

    Starts from the masked data (zeros off omega), which makes the first
    replacement step a no-op.  Runs ``config.max_iters`` updates or stops
    early once the observed-entry residual drops to ``config.step_tol``.
    The trace records the initial state at index 0 and one entry per update.
    """
    X = problem.masked_data()
    K = problem.rank_target
    track_error = problem.x_true is not None
    errs: list[float] = []
    resids: list[float] = []
    ranks: list[int] = []

    def record(X: np.ndarray, sigma_thr: np.ndarray | None) -> float:
        if sigma_thr is None:
            sigma_thr = np.linalg.svd(X, compute_uv=False)
        if track_error:
            errs.append(float(np.linalg.norm(X - problem.x_true)))
        resid = float(np.linalg.norm(
            X[problem.omega_rows, problem.omega_cols] - problem.observed))
        resids.append(resid)
        ranks.append(_numerical_rank(sigma_thr))
        return resid

    record(X, None)
    for _ in range(config.max_iters):
        Z = completion_step(X, problem)
        try:
            U, sigma, Vt = np.linalg.svd(Z, full_matrices=False)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"SVD failed: {exc}") from exc
        rule = params_for_topk(sigma, K, kind, delta)
        sigma_thr = _threshold_spectrum(sigma, rule)
        X = (U * sigma_thr) @ Vt
        if not np.all(np.isfinite(X)):
            raise NumericalError("completion iterate contains non-finite values")
        resid = record(X, sigma_thr)
        if resid <= config.step_tol:
            break
    trace = CompletionTrace(
        frob_error=np.asarray(errs) if track_error else None,
        observed_residual=np.asarray(resids),
        rank=np.asarray(ranks, dtype=int),
    )
    return X, trace
