from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mseps.determinants import DeterminantOracle
from mseps.errors import DimensionTooSmall, IndexOutOfRange
from mseps.identities import (
    LEMMA_IDS,
    MIN_K,
    IdentityCase,
    IdentityId,
    check_bilinear,
    check_corollary2,
    check_identity,
    check_sylvester,
    random_matrix,
    run_sweep,
)
from mseps.numerics import float_mode


def test_lemma_one_at_k0_is_trivial(ln2):
    for m in (1, 2, 3):
        for n in range(3):
            assert check_identity(IdentityCase(IdentityId.L1_EQ10, ln2, m, 0, n)) == 0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_lemmas_on_ln2(ln2_long, m):
    oracle = DeterminantOracle(ln2_long, m)
    checked = 0
    for ident in LEMMA_IDS:
        for k in range(MIN_K[ident], 4):
            for n in range(3):
                for i in range(3):
                    try:
                        residual = check_identity(IdentityCase(ident, ln2_long, m, k, n, i), oracle)
                    except IndexOutOfRange:
                        continue
                    assert residual == 0, (ident, k, n, i)
                    checked += 1
    assert checked > 50


def test_below_min_k_is_rejected(ln2):
    with pytest.raises(IndexOutOfRange):
        check_identity(IdentityCase(IdentityId.L4_EQ15, ln2, 2, 0, 0))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_bilinear_relations_on_ln2(ln2_long, m):
    for i in range(2, m + 2):
        for ident, residual in check_bilinear(ln2_long, m, 1, 0, i):
            assert residual == 0, ident


def test_bilinear_shift_range(ln2_long):
    with pytest.raises(IndexOutOfRange):
        check_bilinear(ln2_long, 2, 1, 0, 4)


def test_corollary_two(ln2_long):
    for m in (1, 2, 3):
        for kappa in range(1, 5):
            assert check_corollary2(ln2_long, m, kappa, 0) == 0


def test_sylvester_on_random_matrices():
    rng = np.random.default_rng(31)
    for index in range(100):
        size = 3 + index % 4
        assert check_sylvester(random_matrix(rng, size, singular_core=index % 5 == 4)) == 0


def test_sylvester_float():
    rng = np.random.default_rng(32)
    mode = float_mode(128)
    matrix = [[mode.coerce(x) for x in row] for row in random_matrix(rng, 5)]
    assert abs(check_sylvester(matrix, mode)) < mode.context.mpf(10) ** -25


def test_sylvester_needs_size_three():
    with pytest.raises(DimensionTooSmall):
        check_sylvester([[1, 2], [3, 4]])


cells = st.fractions(min_value=-6, max_value=6, max_denominator=5)


@settings(max_examples=40, deadline=None)
@given(st.lists(cells, min_size=16, max_size=16))
def test_sylvester_property(values):
    matrix = [values[r * 4 : r * 4 + 4] for r in range(4)]
    assert check_sylvester(matrix) == 0


def test_randomized_sweep_is_exact():
    summary = run_sweep(seed=42, sequences=50, lengths=(13, 13), sylvester_matrices=100)
    assert summary.all_zero
    expected = {ident.value for ident in IdentityId}
    assert expected <= set(summary.stats)
    frame = summary.to_frame()
    assert list(frame.columns) == ["identity", "cases", "failures", "max_abs_residual"]
    assert (frame["failures"] == 0).all()
    assert summary.total_cases == int(frame["cases"].sum())


def test_sweep_is_reproducible():
    a = run_sweep(seed=7, sequences=2, ms=(2,))
    b = run_sweep(seed=7, sequences=2, ms=(2,))
    assert a.to_frame().equals(b.to_frame())


def test_summary_counts_failures():
    from mseps.identities import SweepSummary
    from mseps.numerics import RATIONAL

    summary = SweepSummary(seed=0, sequences=0)
    summary.record("demo", Fraction(1), Fraction(1), RATIONAL)
    summary.record("demo", Fraction(1), Fraction(2), RATIONAL)
    assert not summary.all_zero
    assert summary.stats["demo"].failures == 1
    assert summary.stats["demo"].max_abs_residual == 1
