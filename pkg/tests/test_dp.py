"""Dynamic-programming coefficient table and trace-contraction tests."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_insertions, random_sl2
from toruswrt.algebra import root_of_unity
from toruswrt.dp import (
    brute_force_table,
    dense_trace_oracle,
    dp_update,
    init_table,
    l1_norm,
    run_dp,
    wrt_trace,
)

LEVELS = (3, 5, 7)
pair_ints = st.integers(min_value=-20, max_value=20)
insertion_lists = st.lists(st.tuples(pair_ints, pair_ints), max_size=6)


def test_init_table_is_delta_at_origin():
    for n in LEVELS:
        table = init_table(n)
        assert table.shape == (n, n)
        assert table[0, 0] == 1.0
        assert np.count_nonzero(table) == 1


def test_single_insertion_frozen():
    """Inserting B_{(1,0)} into the empty product gives C = delta_{(1,0)} + delta_{(-1,0)}."""
    n = 5
    table = run_dp([(1, 0)], n)
    want = np.zeros((n, n), dtype=complex)
    want[1, 0] = 1.0
    want[4, 0] = 1.0
    assert np.abs(table - want).max() < 1e-12


def test_two_insertions_frozen_phases():
    """B_{(0,1)} B_{(1,0)} = t^{-1} B_{(1,1)} + t B_{(-1,1)} (left multiplication)."""
    n = 5
    t = root_of_unity(n)
    table = run_dp([(1, 0), (0, 1)], n)
    want = np.zeros((n, n), dtype=complex)
    want[1, 1] = t**-1
    want[4, 4] = t**-1
    want[4, 1] = t
    want[1, 4] = t
    assert np.abs(table - want).max() < 1e-12


def test_table_symmetry_under_negation():
    """C(w) = C(-w): the product of symmetric elements is symmetric."""
    rng = np.random.default_rng(31)
    for n in LEVELS:
        ins = random_insertions(rng, 6, 10)
        table = run_dp(ins, n)
        flipped = table[(-np.arange(n)) % n][:, (-np.arange(n)) % n]
        assert np.abs(table - flipped).max() < 1e-10


@given(ins=insertion_lists, n=st.sampled_from(LEVELS))
@settings(max_examples=60, deadline=None)
def test_dp_equals_brute_force(ins, n):
    assert np.abs(run_dp(ins, n) - brute_force_table(ins, n)).max() < 1e-9


@given(ins=insertion_lists, n=st.sampled_from(LEVELS))
@settings(max_examples=40, deadline=None)
def test_scalar_kernel_matches_vector(ins, n):
    vec = run_dp(ins, n, kernel="vector")
    sca = run_dp(ins, n, kernel="scalar")
    assert np.abs(vec - sca).max() < 1e-12


def test_precomputed_phases_match():
    rng = np.random.default_rng(32)
    for n in LEVELS:
        ins = random_insertions(rng, 8, 12)
        assert np.abs(
            run_dp(ins, n, precompute_phases=True) - run_dp(ins, n, precompute_phases=False)
        ).max() < 1e-12


def test_dp_update_shifts_and_phases():
    n = 5
    table = init_table(n)
    out = dp_update(table, (2, 3), n)
    # only w = +-(2,3) populated, both with phase t^{omega(v, w)} = t^0
    assert out[2, 3] == pytest.approx(1.0)
    assert out[3, 2] == pytest.approx(1.0)
    assert np.count_nonzero(np.abs(out) > 1e-12) == 2


def test_l1_norm_bound():
    rng = np.random.default_rng(33)
    for n in LEVELS:
        for m in (0, 1, 5, 12):
            ins = random_insertions(rng, m, 10)
            assert l1_norm(run_dp(ins, n)) <= 2.0**m + 1e-9


def test_insertions_reduce_mod_level():
    """Insertion indices only matter mod N."""
    n = 5
    ins_a = [(1, 2), (3, 4)]
    ins_b = [(6, -3), (-2, 9)]
    assert np.abs(run_dp(ins_a, n) - run_dp(ins_b, n)).max() < 1e-12


def test_wrt_trace_identity_no_insertions():
    for n in LEVELS:
        assert wrt_trace((1, 0, 0, 1), [], n) == pytest.approx(n * n)


def test_wrt_trace_matches_dense_oracle():
    rng = np.random.default_rng(34)
    for n in (3, 5):
        for _ in range(6):
            g = random_sl2(rng, int(rng.integers(0, 10)))
            ins = random_insertions(rng, int(rng.integers(0, 4)), 6)
            assert wrt_trace(g, ins, n) == pytest.approx(dense_trace_oracle(g, ins, n), abs=1e-8)


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force_table([(1, 0)] * 21, 5)


def test_unknown_kernel_rejected():
    with pytest.raises(ValueError):
        run_dp([], 5, kernel="gpu")
