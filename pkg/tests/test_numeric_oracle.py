import random

import pytest
from hypothesis import given, settings, strategies as st

from spinc_bergman.expansion_pipeline import build_O1, build_Q1
from spinc_bergman.numeric.fock import FockBasisSpec
from spinc_bergman.numeric.oracle import (
    OracleFailure, hermiticity_defect, operator_oracle, random_word, random_word_oracle,
    symbolic_numeric_oracle, word_deviation,
)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_single_word_agrees(seed, ext):
    rng = random.Random(seed)
    raw = random_word(rng, 2, 4, exterior=ext)
    assert word_deviation(raw, FockBasisSpec(2, 8, ext)) < 1e-10


def test_random_words_small():
    res = random_word_oracle(30, seed=7)
    assert res.passed and res.words == 30


def test_strict_failure():
    rng = random.Random(0)
    words = [random_word(rng, 1, 3) for _ in range(3)]
    with pytest.raises(OracleFailure):
        symbolic_numeric_oracle(words, FockBasisSpec(1, 6), tol=-1.0, strict=True)


def test_q1_operator_oracle(jet2):
    assert operator_oracle(build_Q1(), jet2, cutoff=6).passed


@pytest.mark.parametrize("build", [build_O1, build_Q1])
def test_first_order_operators_hermitian(build, jet2):
    assert hermiticity_defect(build(), jet2, cutoff=6) < 1e-10
