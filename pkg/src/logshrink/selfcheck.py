"""Runtime property suites behind the ``selfcheck`` subcommand.

Each suite draws seeded random cases and checks one family of guarantees:
the dead zone and operator ordering, first-order stationarity of the
closed form, monotone descent of the fixed-lambda log iteration, and
fixed-point stationarity of converged solves.
"""

from __future__ import annotations

import math

import numpy as np

from .core import SolverConfig
from .experiments import gen_sparse_problem
from .solver import (
    LambdaSchedule,
    check_delta_condition,
    check_fixed_point,
    objective_f,
    solve,
    surrogate_Q,
)
from .thresholding import ThresholdKind, log_threshold

STATIONARITY_TOL = 1e-9
DESCENT_SLACK = 1e-10


def _random_params(rng, n):
    lam = rng.uniform(0.01, 2.0, size=n)
    delta = rng.uniform(1e-4, 0.1, size=n)
    return lam, delta


def suite_sandwich(trials: int, seed: int) -> tuple[bool, str]:
    """Dead zone is exact and the operator sits between soft and hard."""
    rng = np.random.default_rng(seed)
    lam, delta = _random_params(rng, trials)
    bad = 0
    for lm, dl in zip(lam, delta):
        x0 = math.sqrt(2.0 * lm) - dl
        z = rng.uniform(-3.0 * (x0 + 1.0), 3.0 * (x0 + 1.0), size=64)
        vals = log_threshold(z, lm, dl)
        inside = np.abs(z) <= x0
        if np.any(vals[inside] != 0.0) or np.any(vals[~inside] == 0.0):
            bad += 1
            continue
        if dl < x0:
            zp = np.abs(z[~inside])
            lp = np.abs(vals[~inside])
            if np.any(lp < np.maximum(zp - x0, 0.0) - 1e-12) or np.any(lp > zp + 1e-12):
                bad += 1
    return bad == 0, f"{bad}/{trials} parameter draws violated"


def suite_stationarity(trials: int, seed: int) -> tuple[bool, str]:
    """First-order condition of the prox objective holds at the closed form."""
    rng = np.random.default_rng(seed)
    lam, delta = _random_params(rng, trials)
    worst = 0.0
    for lm, dl in zip(lam, delta):
        x0 = math.sqrt(2.0 * lm) - dl
        z = (x0 + rng.uniform(1e-3, 3.0, size=32)) * rng.choice([-1.0, 1.0], size=32)
        L = log_threshold(z, lm, dl)
        resid = 2.0 * (L - z) + lm * np.sign(L) / (dl + np.abs(L))
        worst = max(worst, float(np.max(np.abs(resid))))
    return worst < STATIONARITY_TOL, f"max residual {worst:.3e}"


def suite_monotonicity(trials: int, seed: int) -> tuple[bool, str]:
    """Fixed-lambda log iteration never increases f or the surrogate."""
    # dead zone at 1.05*delta: just above lam = 2*delta**2, where the jump
    # at the dead-zone edge vanishes and every coordinate move descends
    delta = 0.01
    lam = (2.05 * delta) ** 2 / 2.0
    assert check_delta_condition(lam, delta).satisfied
    schedule = LambdaSchedule.fixed(lam, delta)
    config = SolverConfig(max_iters=120, step_tol=0.0, record_trace=True)
    rng = np.random.default_rng(seed)
    violations = 0
    for t in range(trials):
        sigma = 0.01 if t % 2 else 0.0
        problem = gen_sparse_problem(60, 120, 6, sigma, int(rng.integers(2**63)))
        result = solve(problem, ThresholdKind.LOG, schedule, config)
        fs = [objective_f(x, problem.A, problem.y, lam, delta)
              for x in result.trace.iterates]
        fs = [objective_f(np.zeros(problem.shape[1]), problem.A, problem.y,
                          lam, delta)] + fs
        if any(b > a + DESCENT_SLACK for a, b in zip(fs, fs[1:])):
            violations += 1
            continue
        xs = [np.zeros(problem.shape[1])] + list(result.trace.iterates)
        qs = [surrogate_Q(x_next, x_prev, problem.A, problem.y, lam, delta)
              for x_prev, x_next in zip(xs, xs[1:])]
        if any(q > f + DESCENT_SLACK for q, f in zip(qs, fs[:-1])):
            violations += 1
    return violations == 0, f"{violations}/{trials} runs violated descent"


def suite_fixed_point(trials: int, seed: int) -> tuple[bool, str]:
    """Converged log solves satisfy the stationarity conditions."""
    lam, delta = 0.002, 0.01
    schedule = LambdaSchedule.fixed(lam, delta)
    config = SolverConfig(max_iters=2000, step_tol=1e-12)
    rng = np.random.default_rng(seed)
    failures = 0
    converged_count = 0
    for _ in range(trials):
        problem = gen_sparse_problem(40, 80, 4, 0.0, int(rng.integers(2**63)))
        result = solve(problem, ThresholdKind.LOG, schedule, config)
        if not result.converged:
            continue
        converged_count += 1
        report = check_fixed_point(result.x_hat, problem.A, problem.y,
                                   lam, delta, tol=1e-6)
        if not report.passes:
            failures += 1
    ok = failures == 0 and converged_count > 0
    return ok, f"{converged_count} converged, {failures} failed stationarity"


SUITES = {
    "sandwich": suite_sandwich,
    "stationarity": suite_stationarity,
    "monotonicity": suite_monotonicity,
    "fixed-point": suite_fixed_point,
}


def run_suites(names, trials: int, seed: int) -> list[tuple[str, bool, str]]:
    results = []
    for name in names:
        passed, detail = SUITES[name](trials, seed)
        results.append((name, passed, detail))
    return results
