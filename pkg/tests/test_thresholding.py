import math

import numpy as np
import pytest

from logshrink import (
    ThresholdKind,
    ThresholdRule,
    apply_rule,
    check_delta_condition,
    hard_threshold,
    log_threshold,
    params_for_topk,
    scalar_prox_objective,
    soft_threshold,
)

from oracles import grid_prox_minimizer, stationarity_residual

# frozen from the grid + ternary oracle (grid_prox_minimizer agrees to 3e-9)
LOG_AT_2 = 1.8667941270735882


def test_soft_examples():
    assert soft_threshold(3.0, 1.0) == 2.0
    assert soft_threshold(-0.4, 1.0) == 0.0
    assert soft_threshold(-3.0, 1.0) == -2.0


def test_hard_examples():
    assert hard_threshold(0.5, 1.0) == 0.0
    assert hard_threshold(1.5, 1.0) == 1.5
    assert hard_threshold(-2.0, 1.0) == -2.0


def test_log_matches_brute_force_minimizer():
    got = log_threshold(2.0, 0.5, 0.01)
    assert got == pytest.approx(LOG_AT_2, abs=1e-12)
    assert got == pytest.approx(grid_prox_minimizer(2.0, 0.5, 0.01), abs=1e-6)
    assert abs(stationarity_residual(got, 2.0, 0.5, 0.01)) < 1e-9


def test_log_dead_zone_example():
    # x0 = sqrt(2*0.5) - 0.01 = 0.99, so 0.5 maps to zero
    assert log_threshold(0.5, 0.5, 0.01) == 0.0


def test_log_odd_example():
    assert log_threshold(-2.0, 0.5, 0.01) == -LOG_AT_2


@pytest.mark.parametrize("kind", list(ThresholdKind))
def test_odd_symmetry_exact(kind):
    rng = np.random.default_rng(21)
    z = rng.uniform(-5, 5, size=500)
    if kind is ThresholdKind.SOFT:
        f = lambda v: soft_threshold(v, 0.7)
    elif kind is ThresholdKind.HARD:
        f = lambda v: hard_threshold(v, 0.7)
    else:
        f = lambda v: log_threshold(v, 0.3, 0.02)
    assert np.array_equal(f(-z), -f(z))


def test_log_dead_zone_is_exact():
    lam, delta = 0.5, 0.01
    x0 = math.sqrt(2 * lam) - delta
    rng = np.random.default_rng(22)
    z = rng.uniform(-3, 3, size=10_000)
    vals = log_threshold(z, lam, delta)
    inside = np.abs(z) <= x0
    assert np.all(vals[inside] == 0.0)
    assert np.all(vals[~inside] != 0.0)


def test_log_sandwich_between_soft_and_hard():
    lam, delta = 0.5, 0.01
    x0 = math.sqrt(2 * lam) - delta
    assert delta < x0
    z = np.linspace(x0 * 1.0001, 50.0, 20_000)
    L = log_threshold(z, lam, delta)
    assert np.all(L >= np.maximum(z - x0, 0.0) - 1e-12)
    assert np.all(L <= z + 1e-12)


def test_log_jump_size_at_dead_zone_edge():
    lam, delta = 0.5, 0.01
    x0 = math.sqrt(2 * lam) - delta
    assert log_threshold(x0 + 1e-9, lam, delta) == pytest.approx((x0 - delta) / 2, abs=1e-4)


def test_log_stationarity_random_params():
    rng = np.random.default_rng(23)
    for _ in range(300):
        lam = rng.uniform(0.01, 2.0)
        delta = rng.uniform(1e-4, 0.1)
        x0 = math.sqrt(2 * lam) - delta
        z = (x0 + rng.uniform(1e-3, 3.0)) * rng.choice([-1.0, 1.0])
        L = log_threshold(z, lam, delta)
        assert abs(stationarity_residual(L, z, lam, delta)) < 1e-9


def test_log_shrinkage_vanishes_at_infinity():
    lam, delta = 0.5, 0.01
    z = np.logspace(np.log10(10 * math.sqrt(lam)), 6, 200)
    gap = z - log_threshold(z, lam, delta)
    bound = lam / (2.0 * (z + delta - lam / z))
    # slack covers cancellation: the gap is a difference of z-sized values
    assert np.all(gap <= bound + 4 * np.finfo(float).eps * z)
    assert gap[-1] < 1e-6


def test_scalar_prox_objective_trivials():
    z, lam, delta = 1.7, 0.4, 0.05
    assert scalar_prox_objective(0.0, z, lam, delta) == pytest.approx(
        z**2 + lam * math.log(delta), rel=1e-15)
    assert scalar_prox_objective(z, z, lam, delta) == pytest.approx(
        lam * math.log(delta + abs(z)), rel=1e-15)


def test_grid_argmin_agrees_with_log_threshold():
    z, lam, delta = 2.0, 0.5, 0.01
    grid = np.linspace(math.sqrt(2 * lam) - delta, z, 200_001)
    g = scalar_prox_objective(grid, z, lam, delta)
    best = grid[np.argmin(g)]
    assert best == pytest.approx(log_threshold(z, lam, delta), abs=2e-5)


def test_scalar_prox_objective_rejects_bad_delta():
    with pytest.raises(ValueError):
        scalar_prox_objective(1.0, 1.0, 0.5, 0.0)


def test_apply_rule_soft_example():
    out = apply_rule([3.0, -0.4], ThresholdRule(ThresholdKind.SOFT, 1.0))
    assert np.array_equal(out, [2.0, 0.0])


@pytest.mark.parametrize("rule", [
    ThresholdRule(ThresholdKind.SOFT, 0.5),
    ThresholdRule(ThresholdKind.HARD, 0.5),
    ThresholdRule(ThresholdKind.LOG, 0.5, 0.01),
])
def test_apply_rule_fixes_zero(rule):
    assert np.array_equal(apply_rule([0.0, 0.0, 0.0], rule), [0.0, 0.0, 0.0])


def test_apply_rule_log_matches_scalar_loop():
    rng = np.random.default_rng(24)
    v = rng.uniform(-4, 4, size=64)
    rule = ThresholdRule(ThresholdKind.LOG, 0.37, 0.02)
    out = apply_rule(v, rule)
    for i, z in enumerate(v):
        assert out[i] == log_threshold(float(z), 0.37, 0.02)


def test_topk_soft_example():
    rule = params_for_topk([3.0, 1.0, 2.0, 0.5], 2, ThresholdKind.SOFT)
    assert rule.lam == 1.0


def test_topk_keep_all_example():
    rule = params_for_topk([3.0, 1.0, 2.0, 0.5], 4, ThresholdKind.HARD)
    assert rule.lam == 0.0
    v = np.array([3.0, 1.0, 2.0, 0.5])
    assert np.array_equal(apply_rule(v, rule), v)


def test_topk_log_example():
    v = [3.0, 1.0, 2.0, 0.5]
    rule = params_for_topk(v, 2, ThresholdKind.LOG, 0.01)
    # lam solves sqrt(2*lam) - delta = s_{K+1} = 1
    assert rule.lam == pytest.approx(1.01**2 / 2, abs=1e-9)
    assert np.count_nonzero(apply_rule(v, rule)) == 2


@pytest.mark.parametrize("kind", list(ThresholdKind))
def test_topk_bounds_support_size(kind):
    rng = np.random.default_rng(25)
    for _ in range(40):
        v = rng.standard_normal(rng.integers(1, 40))
        K = int(rng.integers(0, v.size + 2))
        out = apply_rule(v, params_for_topk(v, K, kind, 0.01))
        assert np.count_nonzero(out) <= K
        mags = np.sort(np.abs(v))[::-1]
        if K < v.size and (K == 0 or mags[K - 1] > mags[K]):
            assert np.count_nonzero(out) == K


@pytest.mark.parametrize("kind", list(ThresholdKind))
def test_topk_zeroes_tied_magnitudes(kind):
    v = np.array([3.0, 2.0, -2.0, 1.0])
    out = apply_rule(v, params_for_topk(v, 2, kind, 0.01))
    assert np.count_nonzero(out) == 1  # both tied entries at 2 are zeroed


def test_topk_exact_count_when_gap():
    v = np.array([3.0, 1.0, 2.0, 0.5, -2.5])
    for kind in ThresholdKind:
        out = apply_rule(v, params_for_topk(v, 3, kind, 0.01))
        assert np.count_nonzero(out) == 3


def test_topk_empty_vector():
    rule = params_for_topk([], 2, ThresholdKind.SOFT)
    assert rule.lam == 0.0


def test_topk_log_quarter_variant_keeps_too_much():
    # the divisor-4 alternative puts the dead zone below s_{K+1}
    v = [3.0, 1.0, 2.0, 0.5]
    rule = params_for_topk(v, 2, ThresholdKind.LOG, 0.01, log_divisor=4.0)
    assert rule.dead_zone < 1.0
    assert np.count_nonzero(apply_rule(v, rule)) > 2


def test_rule_validation():
    with pytest.raises(ValueError):
        ThresholdRule(ThresholdKind.LOG, 0.0, 0.01)       # lam = 0 rejected
    with pytest.raises(ValueError):
        ThresholdRule(ThresholdKind.LOG, 0.5, 0.0)        # delta must be positive
    with pytest.raises(ValueError):
        ThresholdRule(ThresholdKind.LOG, 1e-5, 0.01)      # 2*lam < delta**2
    with pytest.raises(ValueError):
        ThresholdRule(ThresholdKind.SOFT, -0.1)
    # the boundary rule 2*lam == delta**2 (dead zone exactly 0) is allowed
    rule = ThresholdRule(ThresholdKind.LOG, 0.5 * 0.01**2, 0.01)
    assert rule.dead_zone == 0.0


def test_log_threshold_rejects_lam_zero():
    with pytest.raises(ValueError):
        log_threshold(1.0, 0.0, 0.01)


def test_delta_condition_examples():
    rep = check_delta_condition(0.5, 0.01)
    assert rep.lhs == pytest.approx(50.02, rel=1e-12)
    assert rep.rhs == pytest.approx(2.0, rel=1e-12)
    assert rep.satisfied

    rep = check_delta_condition(2.0, 1.0)
    assert rep.lhs == pytest.approx(4.0, rel=1e-12)
    assert rep.rhs == pytest.approx(4.0, rel=1e-12)
    assert not rep.satisfied  # strict inequality

    rep = check_delta_condition(0.5, 1e-9)
    assert rep.satisfied
