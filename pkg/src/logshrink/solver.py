"""Shared iterative-thresholding loop (IST/IHT/ILT) and its diagnostics.

The iteration is

    x_{n+1} = T( x_n + A.T @ (y - A @ x_n) )

started from x_0 = 0 with unit step, where T is the soft, hard, or log
operator.  It contracts when the spectral norm of A is below one, which
``solve`` verifies before iterating.  Diagnostics cover monotone descent of
the log-regularized objective via its surrogate, fixed-point stationarity,
and the sufficient condition for fixed points to be local minima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import (
    ContractionError,
    MeasurementProblem,
    NumericalError,
    SolverConfig,
    as_matrix,
    as_vector,
    spectral_norm_estimate,
)
from .thresholding import (
    DEFAULT_DELTA,
    DeltaConditionReport,
    ThresholdKind,
    ThresholdRule,
    apply_rule,
    check_delta_condition,
    params_for_topk,
)

__all__ = [
    "LambdaSchedule",
    "IterateTrace",
    "FixedPointReport",
    "SolveResult",
    "LocalMinReport",
    "gradient_step",
    "objective_f",
    "surrogate_Q",
    "solve",
    "check_fixed_point",
    "check_local_min_condition",
    "check_delta_condition",
]


@dataclass(frozen=True)
class LambdaSchedule:
    """Fixed regularization weight, or a per-iteration top-K rule."""

    mode: str  # "fixed" | "topk"
    lam: float = 0.0
    K: int = 0
    delta: float = DEFAULT_DELTA

    def __post_init__(self):
        if self.mode not in ("fixed", "topk"):
            raise ValueError("mode must be 'fixed' or 'topk'")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.mode == "fixed" and self.lam <= 0:
            raise ValueError("fixed schedule requires lam > 0")
        if self.mode == "topk" and self.K < 0:
            raise ValueError("topk schedule requires K >= 0")

    @classmethod
    def fixed(cls, lam: float, delta: float = DEFAULT_DELTA) -> "LambdaSchedule":
        return cls("fixed", lam=lam, delta=delta)

    @classmethod
    def top_k(cls, K: int, delta: float = DEFAULT_DELTA) -> "LambdaSchedule":
        return cls("topk", K=K, delta=delta)


@dataclass(frozen=True)
class IterateTrace:
    """Per-iteration history; ``iterates`` only when trace recording is on."""

    objective_f: np.ndarray
    residual_sq: np.ndarray
    nnz: np.ndarray
    step_delta: np.ndarray
    iterates: list[np.ndarray] | None = None

    def __len__(self) -> int:
        return self.objective_f.shape[0]


@dataclass(frozen=True)
class FixedPointReport:
    """Stationarity of an iterate under the thresholded gradient map.

    ``s`` is the correlation vector ``A.T @ (y - A x)``.  On the support the
    operator's first-order condition must hold (for the log rule,
    ``s_i = lam*sign(x_i) / (2*(|x_i| + delta))``); off the support ``|s_i|``
    must stay inside the dead zone.
    """

    s: np.ndarray
    support: np.ndarray
    off_support: np.ndarray
    max_support_violation: float
    max_offsupport_excess: float
    passes: bool
    tol: float


@dataclass(frozen=True)
class SolveResult:
    x_hat: np.ndarray
    iterations_run: int
    converged: bool
    trace: IterateTrace
    fixed_point: FixedPointReport


class LocalMinReport(NamedTuple):
    min_singular: float
    passes: bool


def gradient_step(x, A, y) -> np.ndarray:
    """One unit gradient step on the residual: x + A.T @ (y - A @ x)."""
    A = as_matrix(A, "A")
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    if x.shape[0] != A.shape[1] or y.shape[0] != A.shape[0]:
        raise ValueError("dimension mismatch between x, A, y")
    return x + A.T @ (y - A @ x)


def objective_f(x, A, y, lam: float, delta: float) -> float:
    """Log-regularized objective: ||y - A x||^2 + lam * sum(log(delta + |x|))."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    A = as_matrix(A, "A")
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    r = y - A @ x
    return float(r @ r + lam * np.sum(np.log(delta + np.abs(x))))


def surrogate_Q(x, z, A, y, lam: float, delta: float) -> float:
    """Surrogate objective: f(x) + ||x - z||^2 - ||A (x - z)||^2.

    Coincides with ``objective_f`` at x == z, and its coordinate-wise
    minimization reproduces the log-thresholding iteration.
    """
    x = as_vector(x, "x")
    z = as_vector(z, "z")
    if x.shape != z.shape:
        raise ValueError("x and z must have equal length")
    A = as_matrix(A, "A")
    d = x - z
    Ad = A @ d
    return objective_f(x, A, y, lam, delta) + float(d @ d - Ad @ Ad)


def _trace_objective(kind: ThresholdKind, x: np.ndarray, residual_sq: float,
                     rule: ThresholdRule) -> float:
    """Objective matching the prox form (u - z)^2 + penalty of each operator."""
    if kind is ThresholdKind.LOG:
        return residual_sq + rule.lam * float(np.sum(np.log(rule.delta + np.abs(x))))
    if kind is ThresholdKind.SOFT:
        return residual_sq + 2.0 * rule.lam * float(np.sum(np.abs(x)))
    return residual_sq + rule.lam ** 2 * float(np.count_nonzero(x))


def _rule_for(kind: ThresholdKind, schedule: LambdaSchedule,
              z: np.ndarray) -> ThresholdRule:
    if schedule.mode == "fixed":
        return ThresholdRule(kind, schedule.lam, schedule.delta)
    return params_for_topk(z, schedule.K, kind, schedule.delta)


def fixed_point_report(x_bar, A, y, kind: ThresholdKind, lam: float,
                       delta: float = DEFAULT_DELTA,
                       tol: float = 1e-6) -> FixedPointReport:
    """Stationarity report for any of the three operators.

    Support condition: log rule ``s_i = lam*sign(x_i)/(2*(|x_i| + delta))``;
    soft rule ``s_i = lam*sign(x_i)``; hard rule ``s_i = 0``.  Off support,
    ``|s_i|`` must not exceed the operator's dead zone.
    """
    A = as_matrix(A, "A")
    x_bar = as_vector(x_bar, "x_bar")
    y = as_vector(y, "y")
    s = A.T @ (y - A @ x_bar)
    on = x_bar != 0.0
    support = np.flatnonzero(on)
    off_support = np.flatnonzero(~on)
    if kind is ThresholdKind.LOG:
        target = lam * np.sign(x_bar[on]) / (2.0 * (np.abs(x_bar[on]) + delta))
        bound = math.sqrt(2.0 * lam) - delta
    elif kind is ThresholdKind.SOFT:
        target = lam * np.sign(x_bar[on])
        bound = lam
    else:
        target = np.zeros(support.size)
        bound = lam
    viol = float(np.max(np.abs(s[on] - target))) if support.size else 0.0
    excess = float(max(np.max(np.abs(s[~on])) - bound, 0.0)) if off_support.size else 0.0
    return FixedPointReport(
        s=s,
        support=support,
        off_support=off_support,
        max_support_violation=viol,
        max_offsupport_excess=excess,
        passes=(viol <= tol and excess <= tol),
        tol=tol,
    )


def check_fixed_point(x_bar, A, y, lam: float, delta: float,
                      tol: float = 1e-6) -> FixedPointReport:
    """Fixed-point stationarity report for the log-thresholding iteration."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return fixed_point_report(x_bar, A, y, ThresholdKind.LOG, lam, delta, tol)


def check_local_min_condition(A, support) -> LocalMinReport:
    """Sufficient condition for fixed points to be local minima.

    Passes when the smallest singular value of the support-restricted
    columns exceeds 1/2 while the full matrix remains a contraction.
    An empty support passes trivially with a NaN sentinel.
    """
    A = as_matrix(A, "A")
    idx = np.asarray(support)
    if idx.dtype == bool:
        idx = np.flatnonzero(idx)
    else:
        idx = np.unique(idx.astype(int))
    if idx.size == 0:
        return LocalMinReport(math.nan, True)
    if idx.min() < 0 or idx.max() >= A.shape[1]:
        raise ValueError("support index out of range")
    min_singular = float(np.linalg.svd(A[:, idx], compute_uv=False)[-1])
    sigma_max = float(np.linalg.svd(A, compute_uv=False)[0])
    return LocalMinReport(min_singular, bool(min_singular > 0.5 and sigma_max < 1.0))


def solve(problem: MeasurementProblem, kind: ThresholdKind,
          schedule: LambdaSchedule,
          config: SolverConfig = SolverConfig()) -> SolveResult:
    """Run iterative thresholding from x = 0 until the step stalls.

    The problem must already be a contraction (``rescale_to_contraction``);
    this is verified and a ``ContractionError`` raised otherwise.  In topk
    mode the rule parameters are recomputed each iteration from the
    post-gradient vector.  Stops when the sup-norm step change drops to
    ``config.step_tol`` or after ``config.max_iters`` iterations; the
    ``converged`` flag records which fired.
    """
    A, y = problem.A, problem.y
    sigma = spectral_norm_estimate(A)
    if sigma >= 1.0:
        raise ContractionError(
            f"spectral norm {sigma:.6g} >= 1; rescale the problem first")
    n = A.shape[1]
    x = np.zeros(n)
    objs: list[float] = []
    res: list[float] = []
    nnzs: list[int] = []
    steps: list[float] = []
    snapshots: list[np.ndarray] | None = [] if config.record_trace else None
    converged = False
    iterations = 0
    rule = None
    for _ in range(config.max_iters):
        z = x + A.T @ (y - A @ x)
        rule = _rule_for(kind, schedule, z)
        x_new = apply_rule(z, rule)
        if not np.all(np.isfinite(x_new)):
            raise NumericalError("iterate contains non-finite values")
        step = float(np.max(np.abs(x_new - x))) if n else 0.0
        r = y - A @ x_new
        rsq = float(r @ r)
        objs.append(_trace_objective(kind, x_new, rsq, rule))
        res.append(rsq)
        nnzs.append(int(np.count_nonzero(x_new)))
        steps.append(step)
        if snapshots is not None:
            snapshots.append(x_new.copy())
        x = x_new
        iterations += 1
        if step <= config.step_tol:
            converged = True
            break
    trace = IterateTrace(
        objective_f=np.asarray(objs),
        residual_sq=np.asarray(res),
        nnz=np.asarray(nnzs, dtype=int),
        step_delta=np.asarray(steps),
        iterates=snapshots,
    )
    report_tol = max(1e-6, 10.0 * config.step_tol)
    fp = fixed_point_report(x, A, y, kind, rule.lam, schedule.delta,
                            tol=report_tol)
    return SolveResult(
        x_hat=x,
        iterations_run=iterations,
        converged=converged,
        trace=trace,
        fixed_point=fp,
    )
