"""Signed-sum counting, modular folding, and estimator interface tests."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toruswrt.counting import (
    ColinearInstance,
    brute_force_count,
    brute_force_histogram,
    decision_positive,
    dp_count_mod,
    estimate_coefficient,
    hoeffding_shots,
    safe_modulus,
    signed_to_subset,
)
from toruswrt.sim import SamplingPlan

weights = st.lists(st.integers(min_value=-12, max_value=12), min_size=1, max_size=10)
targets = st.integers(min_value=-20, max_value=20)


def test_instance_bounds():
    inst = ColinearInstance([3, -4, 5], -2)
    assert inst.m == 3
    assert inst.abs_sum == 12
    assert inst.wrap_bound == 14
    assert safe_modulus(inst) == 15


def test_safe_modulus_is_odd_and_above_bound():
    for a, z in ([(1, 1), 0], [(5,), 0], [(2, 2), 1], [(50,) * 3, 7]):
        inst = ColinearInstance(a, z)
        n = safe_modulus(inst)
        assert n % 2 == 1 and n >= 3 and n > inst.wrap_bound


def test_brute_force_small_cases():
    assert brute_force_count(ColinearInstance([1, 1], 0)) == 2
    assert brute_force_count(ColinearInstance([1, 1], 2)) == 1
    assert brute_force_count(ColinearInstance([1], 2)) == 0
    assert brute_force_count(ColinearInstance([0], 0)) == 2
    assert brute_force_count(ColinearInstance([2, 3, 5], 0)) == 2  # +2+3-5 and -2-3+5


@given(a=weights, z=targets)
@settings(max_examples=150, deadline=None)
def test_fold_identity(a, z):
    """c_N(z) equals the histogram of true counts folded mod N, for any N."""
    inst = ColinearInstance(a, z)
    hist = brute_force_histogram(inst)
    for modulus in (3, 5, 8, safe_modulus(inst)):
        folded = sum(c for k, c in hist.items() if (k - z) % modulus == 0)
        assert dp_count_mod(inst, modulus) == folded


@given(a=weights, z=targets)
@settings(max_examples=100, deadline=None)
def test_aliasing_free_equality(a, z):
    inst = ColinearInstance(a, z)
    assert dp_count_mod(inst, safe_modulus(inst)) == brute_force_count(inst)


@given(a=weights)
@settings(max_examples=100, deadline=None)
def test_conservation_and_symmetry(a):
    """Sum of counts over targets is 2^m, and c(z) = c(-z)."""
    inst = ColinearInstance(a, 0)
    hist = brute_force_histogram(inst)
    assert sum(hist.values()) == 2 ** inst.m
    for k, c in hist.items():
        assert hist.get(-k) == c


def test_wraparound_counterexample():
    for n in (3, 5, 7):
        inst = ColinearInstance([n], 0)
        assert dp_count_mod(inst, n) == 2
        assert brute_force_count(inst) == 0


@given(a=weights, z=targets)
@settings(max_examples=100, deadline=None)
def test_decision_matches_brute_force(a, z):
    inst = ColinearInstance(a, z)
    assert decision_positive(inst) == (brute_force_count(inst) > 0)


@given(a=weights, z=targets)
@settings(max_examples=100, deadline=None)
def test_subset_sum_reduction(a, z):
    inst = ColinearInstance(a, z)
    target = signed_to_subset(inst)
    count = brute_force_count(inst)
    if target is None:
        assert count == 0
    else:
        m = inst.m
        subset_hits = sum(
            1
            for k in range(1 << m)
            if sum(ai for i, ai in enumerate(inst.a) if (k >> i) & 1) == target
        )
        assert subset_hits == count


def test_dp_count_mod_rejects_bad_modulus():
    with pytest.raises(ValueError):
        dp_count_mod(ColinearInstance([1], 0), 0)


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force_count(ColinearInstance([1] * 25, 0))


def test_estimate_exact_mode_properties():
    inst = ColinearInstance([1, 2, 2], 1)
    result = estimate_coefficient(inst, mode="exact")
    assert result.level == safe_modulus(inst) == 7
    assert result.alpha == pytest.approx(2 / 8, abs=1e-12)
    assert result.count_rounded == 2
    assert result.count_estimate == pytest.approx(2.0, abs=1e-9)
    assert result.aliasing_free
    assert not result.uninformative
    assert result.alpha_interval == (result.alpha, result.alpha)


def test_estimate_sample_mode_interval():
    inst = ColinearInstance([1, 2, 2], 1)
    plan = SamplingPlan(epsilon=0.05, delta=0.01, seed=5)
    result = estimate_coefficient(inst, plan=plan, mode="sample")
    lo, hi = result.alpha_interval
    assert lo <= result.alpha <= hi
    assert hi - lo <= 2 * 0.05 + 1e-12
    assert result.report.shots_used == 4239
    # true alpha = 0.25 with eps = 0.05: interval should usually contain it
    assert lo - 0.05 <= 0.25 <= hi + 0.05


def test_estimate_uninformative_flag():
    """Wide intervals that cannot separate count 0 from count 1 are flagged."""
    inst = ColinearInstance([1] * 8, 8)  # alpha = 2^-8
    plan = SamplingPlan(epsilon=0.2, delta=0.05, seed=1)
    result = estimate_coefficient(inst, plan=plan, mode="sample")
    assert result.uninformative
    assert result.count_rounded is None
    exact = estimate_coefficient(inst, mode="exact")
    assert not exact.uninformative
    assert exact.count_rounded == 1


def test_estimator_unbiased_over_seeds():
    """Mean of sample-mode estimates over 200 seeds is within 3 eps/sqrt(200)."""
    inst = ColinearInstance([1, 2, 2, 3], 2)
    level = safe_modulus(inst)
    exact = estimate_coefficient(inst, level=level, mode="exact").alpha
    epsilon = 0.05
    estimates = [
        estimate_coefficient(
            inst, level=level, plan=SamplingPlan(epsilon=epsilon, delta=0.01, seed=s), mode="sample"
        ).alpha
        for s in range(200)
    ]
    assert abs(float(np.mean(estimates)) - exact) <= 3 * epsilon / np.sqrt(200)


def test_hoeffding_shots_monotonicity():
    assert hoeffding_shots(0.05, 0.01) == 4239
    assert hoeffding_shots(0.1, 0.01) < 4239
    assert hoeffding_shots(0.05, 0.001) > 4239
