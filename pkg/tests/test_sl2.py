"""SL2(Z) word evaluation and generator decomposition tests."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_sl2, random_word
from toruswrt.sl2 import (
    IDENTITY,
    S_MAT,
    T_MAT,
    TINV_MAT,
    decompose,
    det,
    evaluate,
    mat_mul,
    max_entry,
    require_sl2,
    word_length,
)

words = st.lists(st.sampled_from(["S", "T", "Tinv"]), max_size=25)


def test_generator_matrices():
    assert S_MAT == (0, -1, 1, 0)
    assert T_MAT == (1, 1, 0, 1)
    assert TINV_MAT == (1, -1, 0, 1)
    assert mat_mul(T_MAT, TINV_MAT) == IDENTITY
    assert det(S_MAT) == det(T_MAT) == 1


def test_evaluate_left_to_right():
    # word [A, B] means the product A first, then B applied on the left:
    # evaluate(["S","T"]) must equal T-then... the fixed convention is the
    # plain ordered product S @ T read left to right.
    assert evaluate(["S"]) == S_MAT
    assert evaluate(["S", "T"]) == mat_mul(S_MAT, T_MAT)
    assert evaluate([]) == IDENTITY
    with pytest.raises(ValueError):
        evaluate(["S", "X"])


def test_require_sl2_rejects_non_unimodular():
    with pytest.raises(ValueError):
        require_sl2((1, 1, 1, 1))
    with pytest.raises(ValueError):
        require_sl2((2, 0, 0, 2))
    assert require_sl2([0, -1, 1, 0]) == (0, -1, 1, 0)


def test_decompose_frozen_words():
    assert decompose(IDENTITY) == []
    assert decompose(T_MAT) == ["T"]
    assert decompose(TINV_MAT) == ["Tinv"]
    assert decompose((-1, 0, 0, -1)) == ["S", "S"]
    assert evaluate(decompose(S_MAT)) == S_MAT
    for k in (2, 3, 7):
        g = (1, k, 0, 1)
        assert decompose(g) == ["T"] * k
        assert decompose((1, -k, 0, 1)) == ["Tinv"] * k


@given(word=words)
@settings(max_examples=300)
def test_roundtrip_random_words(word):
    g = evaluate(word)
    assert evaluate(decompose(g)) == g


def test_roundtrip_large_entries():
    rng = np.random.default_rng(11)
    for _ in range(50):
        g = random_sl2(rng, 60)
        word = decompose(g)
        assert evaluate(word) == g
        assert word_length(g) == len(word)


def test_word_length_logarithmic_in_entries():
    """Word length grows like a constant times log2 of the largest entry."""
    rng = np.random.default_rng(12)
    lengths, logs = [], []
    for _ in range(200):
        g = random_sl2(rng, int(rng.integers(5, 50)))
        entry = max_entry(g)
        if entry < 2:
            continue
        lengths.append(len(decompose(g)))
        logs.append(np.log2(entry))
    slope, intercept = np.polyfit(logs, lengths, 1)
    residual = max(l - (slope * x + intercept) for l, x in zip(lengths, logs))
    assert np.isfinite(slope) and np.isfinite(intercept)
    assert all(l <= slope * x + intercept + residual + 1e-9 for l, x in zip(lengths, logs))


def test_homomorphism_of_evaluate():
    rng = np.random.default_rng(13)
    for _ in range(50):
        w1, w2 = random_word(rng, 8), random_word(rng, 8)
        assert evaluate(w1 + w2) == mat_mul(evaluate(w1), evaluate(w2))
