"""Soft, hard, and log thresholding operators and the adaptive top-K rule.

All three operators are odd functions applied element-wise after a gradient
step.  Soft thresholding is the prox of the l1 penalty; hard thresholding
keeps entries whose magnitude clears the threshold; log thresholding is the
closed-form local minimizer of

    g(u) = (u - z)^2 + lam * log(delta + |u|)

on the nonzero basin, with dead zone |z| <= x0 = sqrt(2*lam) - delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import as_vector

DEFAULT_DELTA = 0.01


class ThresholdKind(Enum):
    SOFT = "soft"
    HARD = "hard"
    LOG = "log"


def _validate_log_params(lam: float, delta: float) -> None:
    if lam <= 0:
        raise ValueError("log thresholding requires lam > 0")
    if delta <= 0:
        raise ValueError("log thresholding requires delta > 0")
    # 2*lam >= delta^2 keeps the dead zone x0 = sqrt(2*lam) - delta
    # nonnegative; below it the two nonzero branches overlap.  Equality is
    # the degenerate keep-sign rule a top-K schedule emits when fewer than
    # K+1 entries are nonzero.
    if 2.0 * lam < delta * delta:
        raise ValueError("log thresholding requires 2*lam >= delta**2")


@dataclass(frozen=True)
class ThresholdRule:
    """Operator kind plus parameters; the one value selecting IST/IHT/ILT.

    ``lam`` is the regularization weight; for ``HARD`` it is read as the
    keep-threshold.  ``delta`` is the log-smoothing offset and matters only
    for ``LOG``.
    """

    kind: ThresholdKind
    lam: float
    delta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise ValueError("lam must be finite")
        if self.kind is ThresholdKind.LOG:
            _validate_log_params(self.lam, self.delta)
        elif self.lam < 0:
            raise ValueError("lam must be nonnegative")

    @property
    def dead_zone(self) -> float:
        """Largest input magnitude mapped to zero."""
        if self.kind is ThresholdKind.LOG:
            return math.sqrt(2.0 * self.lam) - self.delta
        return self.lam


@dataclass(frozen=True)
class DeltaConditionReport:
    """Evaluation of the strict condition lam/delta + 2*delta > 2*sqrt(2*lam).

    When it holds, small perturbations around a fixed point increase the
    surrogate objective, which is what makes fixed points local minima.
    """

    lam: float
    delta: float
    lhs: float
    rhs: float
    satisfied: bool


def check_delta_condition(lam: float, delta: float) -> DeltaConditionReport:
    """Evaluate lam/delta + 2*delta > 2*sqrt(2*lam) (strict)."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if delta <= 0:
        raise ValueError("delta must be positive")
    lhs = lam / delta + 2.0 * delta
    rhs = 2.0 * math.sqrt(2.0 * lam)
    return DeltaConditionReport(lam, delta, lhs, rhs, lhs > rhs)


def soft_threshold(z, lam: float):
    """sign(z) * max(|z| - lam, 0); accepts scalars or arrays."""
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    return np.sign(z) * np.maximum(np.abs(z) - lam, 0.0)


def hard_threshold(z, t: float):
    """z where |z| > t, else 0; accepts scalars or arrays."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return z * (np.abs(z) > t)


def log_threshold(z, lam: float, delta: float):
    """Closed-form log-thresholding; accepts scalars or arrays.

    For |z| > x0 = sqrt(2*lam) - delta returns the local (not global)
    minimizer of (u - z)^2 + lam*log(delta + |u|), namely

        sign(z) * ((|z| - delta) + sqrt((|z| + delta)^2 - 2*lam)) / 2,

    and 0 otherwise.  Computing on |z| and restoring the sign makes odd
    symmetry exact in floating point.
    """
    _validate_log_params(lam, delta)
    x0 = math.sqrt(2.0 * lam) - delta
    a = np.abs(np.asarray(z, dtype=float))
    scalar = a.ndim == 0
    a = np.atleast_1d(a)
    out = np.zeros_like(a)
    m = a > x0
    if m.any():
        am = a[m]
        # clamp: the radicand is >= 0 on the branch but can round below
        rad = np.maximum((am + delta) ** 2 - 2.0 * lam, 0.0)
        out[m] = 0.5 * ((am - delta) + np.sqrt(rad))
    out *= np.sign(np.atleast_1d(z))
    return out[0] if scalar else out


def scalar_prox_objective(candidate, z: float, lam: float, delta: float):
    """(candidate - z)^2 + lam*log(delta + |candidate|).

    Exposed so tests can brute-force the basin minimizer as an oracle;
    ``candidate`` may be an array of trial points.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    c = np.asarray(candidate, dtype=float)
    return (c - z) ** 2 + lam * np.log(delta + np.abs(c))


def apply_rule(v, rule: ThresholdRule) -> np.ndarray:
    """Apply the scalar operator selected by ``rule`` to each entry of ``v``."""
    v = as_vector(v, "v")
    if rule.kind is ThresholdKind.SOFT:
        return soft_threshold(v, rule.lam)
    if rule.kind is ThresholdKind.HARD:
        return hard_threshold(v, rule.lam)
    return log_threshold(v, rule.lam, rule.delta)


def params_for_topk(
    v,
    K: int,
    kind: ThresholdKind,
    delta: float = DEFAULT_DELTA,
    log_divisor: float = 2.0,
) -> ThresholdRule:
    """Build the rule that zeroes all but the K largest-magnitude entries.

    With ``s`` the (K+1)-th largest magnitude of ``v`` (0 when K is at least
    the length), soft and hard rules use ``s`` as their threshold directly.
    The log rule uses ``lam = (s + delta)**2 / 2`` so its dead zone lands
    exactly on ``s``.  ``log_divisor=4`` selects an alternative that leaves
    the (K+1)-th coefficient above the dead zone; it is provided for
    comparison only.  Tied magnitudes are all zeroed, so the survivor count
    never exceeds K.
    """
    v = as_vector(v, "v")
    if K < 0:
        raise ValueError("K must be nonnegative")
    if K < v.size:
        s = float(np.partition(np.abs(v), v.size - 1 - K)[v.size - 1 - K])
    else:
        s = 0.0
    if kind is not ThresholdKind.LOG:
        return ThresholdRule(kind, s, delta)
    # tiny relative inflation keeps exact ties inside the dead zone after
    # the lam -> x0 float round trip
    s_safe = s * (1.0 + 1e-12)
    lam = (s_safe + delta) ** 2 / log_divisor
    return ThresholdRule(ThresholdKind.LOG, lam, delta)
