"""Dense problem records plus the spectral-norm and rescaling utilities.

Everything here is a pure function of its inputs; problem records are
frozen after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_RHO = 0.99


class ContractionError(ValueError):
    """The sensing matrix is not a contraction (spectral norm >= 1)."""


class NumericalError(RuntimeError):
    """An iteration produced NaN or infinite values."""


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Coerce to a finite 1-D float array."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D float array."""
    arr = np.asarray(A, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def spectral_norm_estimate(A, iters: int = 1000, tol: float = 1e-9) -> float:
    """Largest singular value of ``A`` by power iteration on ``A.T @ A``.

    The start vector is the normalized all-ones vector, so repeated calls
    are bit-identical.  Iteration stops when the Rayleigh quotient changes
    by less than ``tol`` in relative terms, or after ``iters`` rounds.
    """
    A = as_matrix(A, "A")
    if A.size == 0:
        raise ValueError("A must be nonempty")
    if iters < 1:
        raise ValueError("iters must be >= 1")
    n = A.shape[1]
    v = np.full(n, 1.0 / math.sqrt(n))
    lam_prev = 0.0
    for _ in range(iters):
        u = A.T @ (A @ v)
        nu = float(np.linalg.norm(u))
        if nu == 0.0:
            # all-ones start happens to lie in the null space; restart from
            # a fixed ramp so the estimate stays deterministic
            v = np.arange(1.0, n + 1.0)
            v /= np.linalg.norm(v)
            u = A.T @ (A @ v)
            nu = float(np.linalg.norm(u))
            if nu == 0.0:
                return 0.0
        lam = float(v @ u)
        v = u / nu
        if abs(lam - lam_prev) <= tol * max(abs(lam), np.finfo(float).tiny):
            lam_prev = lam
            break
        lam_prev = lam
    return math.sqrt(max(lam_prev, 0.0))


def rescale_to_contraction(A, y, rho: float = DEFAULT_RHO):
    """Divide ``A`` and ``y`` by a common factor so the spectral norm is ``rho``.

    Returns ``(A_scaled, y_scaled, c)`` with ``c = sigma_max(A) / rho`` when
    the matrix needs shrinking and ``c = 1`` otherwise.  Dividing both by the
    same ``c`` preserves every solution of ``y = A x`` and scales residuals
    uniformly, so recovery metrics stay comparable.
    """
    A = as_matrix(A, "A")
    y = as_vector(y, "y")
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    if y.shape[0] != A.shape[0]:
        raise ValueError("y length must equal the row count of A")
    sigma = spectral_norm_estimate(A)
    # the slack keeps the operation idempotent: re-estimating the norm of a
    # just-rescaled matrix can land a few ulps either side of rho
    if sigma <= rho * (1.0 + 1e-8):
        return A, y, 1.0
    c = sigma / rho
    return A / c, y / c, c


def _frozen_copy(arr: np.ndarray) -> np.ndarray:
    out = arr.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class MeasurementProblem:
    """A sparse-recovery instance ``y = A x + noise``.

    ``scale_applied`` records the factor both ``A`` and ``y`` were divided by
    when the instance was rescaled to a contraction; the ground truth
    ``x_true`` is untouched by that rescaling.
    """

    A: np.ndarray
    y: np.ndarray
    x_true: np.ndarray | None = None
    noise_sigma: float = 0.0
    seed: int = 0
    scale_applied: float = 1.0

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        y = as_vector(self.y, "y")
        if y.shape[0] != A.shape[0]:
            raise ValueError("y length must equal the row count of A")
        x_true = self.x_true
        if x_true is not None:
            x_true = as_vector(x_true, "x_true")
            if x_true.shape[0] != A.shape[1]:
                raise ValueError("x_true length must equal the column count of A")
            object.__setattr__(self, "x_true", _frozen_copy(x_true))
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        if self.scale_applied <= 0:
            raise ValueError("scale_applied must be positive")
        object.__setattr__(self, "A", _frozen_copy(A))
        object.__setattr__(self, "y", _frozen_copy(y))

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape


@dataclass(frozen=True)
class SolverConfig:
    """Iteration budget and stopping rule shared by all solvers."""

    max_iters: int = 250
    step_tol: float = 1e-8
    rho: float = DEFAULT_RHO
    record_trace: bool = False

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.step_tol < 0:
            raise ValueError("step_tol must be nonnegative")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")
