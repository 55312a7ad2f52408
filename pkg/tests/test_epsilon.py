from __future__ import annotations

import math
from fractions import Fraction

import pytest

from mseps.determinants import DeterminantOracle
from mseps.epsilon import (
    CellStatus,
    ProgressiveEpsilon,
    cross_rule_table,
    empty_table,
    multistep_epsilon,
    progressive_append,
    wynn_epsilon,
)
from mseps.errors import Breakdown, IndexOutOfRange
from mseps.numerics import SequencePrefix, ZeroPolicy, float_mode
from mseps.shanks import epsilon_entry_det, shanks

from .conftest import ln2_terms, random_sweep


def test_wynn_spot_values(ln2):
    table = wynn_epsilon(ln2)
    assert table.value(2, 0) == Fraction(7, 10)
    assert table.value(4, 0) == Fraction(52, 75)
    assert table.value(1, 0) == -2


def test_initial_columns(ln2):
    table = multistep_epsilon(ln2, 3)
    assert table.min_k == -3
    for n in range(ln2.N + 1):
        assert table.value(-3, n) == 0
        assert table.value(-2, n) == n
        assert table.value(-1, n) == n
        assert table.value(0, n) == ln2[n]


def test_multistep_m2_spot_values(ln2):
    table = multistep_epsilon(ln2, 2)
    assert table.value(1, 0) == -2
    assert table.value(2, 0) == Fraction(3, 5)
    assert table.value(3, 0) == Fraction(12, 17)


def test_triangle_shape(ln2):
    table = multistep_epsilon(ln2, 2)
    assert table.state(ln2.N, 0).is_valid
    assert table.state(ln2.N, 1).status is CellStatus.UNSET
    with pytest.raises(IndexOutOfRange):
        table.value(ln2.N + 1, 0)


def test_max_k_truncates(ln2):
    table = multistep_epsilon(ln2, 1, max_k=3)
    assert max(table.columns()) == 3


def test_breakdown_poisons_descendants():
    seq = SequencePrefix.from_values([1, 1, 2, 4, 7, 11])
    table = wynn_epsilon(seq)
    assert table.status(1, 0) == "breakdown"
    assert table.state(1, 0).origin == (1, 0)
    assert table.state(3, 0).status is CellStatus.BREAKDOWN
    assert table.state(3, 0).origin == (1, 0)
    with pytest.raises(Breakdown):
        table.value(3, 0)
    assert table.state(1, 1).is_valid
    assert (1, 0) in table.breakdowns()


def test_acceleration_on_ln2():
    seq = ln2_terms(9)
    table = wynn_epsilon(seq)
    estimate = table.value(8, 0)
    assert estimate == epsilon_entry_det(seq, 1, 8, 0)
    error = abs(float(estimate) - math.log(2))
    assert error < 1e-4
    assert error / abs(float(seq[8]) - math.log(2)) < 1e-2


@pytest.mark.parametrize("m", [1, 2, 3])
def test_progressive_equals_batch(sweep, m):
    for seq in sweep:
        table = empty_table(m)
        for term in seq:
            table = progressive_append(table, term)
        assert table.same_cells(multistep_epsilon(seq, m))


def test_progressive_append_keeps_the_table_policy(ln2):
    mode = float_mode(64)
    seq = ln2.with_mode(mode)
    coarse = ZeroPolicy(mode, mode.coerce("0.05"), mode.coerce("1e-30"))
    batch = multistep_epsilon(seq, 1, coarse)
    assert batch.breakdowns()
    table = empty_table(1, mode, policy=coarse)
    for term in seq:
        table = progressive_append(table, term)
    assert table.policy == coarse
    assert table.same_cells(batch)
    assert not table.same_cells(multistep_epsilon(seq, 1))


def test_progressive_accumulator_keeps_a_window(ln2):
    batch = wynn_epsilon(ln2)
    acc = ProgressiveEpsilon(m=1)
    for count, term in enumerate(ln2):
        diagonal = acc.push(term)
        for kappa, cell in diagonal.items():
            assert cell == batch.state(kappa, count - kappa)
    assert acc.best_estimate() == batch.value(8, 0)
    assert acc.window_size() < len(batch.cells)


def test_m1_collapse(sweep):
    """Multistep m=1, Wynn, the cross rule and the Hankel ratios agree."""
    for seq in sweep:
        multi = multistep_epsilon(seq, 1)
        wynn = wynn_epsilon(seq)
        cross = cross_rule_table(seq)
        assert multi.same_cells(wynn)
        for (kappa, n), cell in multi.iter_cells():
            if kappa < 2 or kappa % 2 or not cell.is_valid:
                continue
            other = cross.state(kappa, n)
            if other.is_valid:
                assert other.value == cell.value
            try:
                assert shanks(seq, kappa // 2, n) == cell.value
            except Breakdown:
                pass


def test_cross_rule_on_ln2(ln2):
    cross = cross_rule_table(ln2)
    assert cross.value(2, 0) == Fraction(7, 10)
    assert cross.value(4, 0) == Fraction(52, 75)
    assert cross.state(-2, 0).status is CellStatus.INFINITY
    assert cross.columns() == [-2, 0, 2, 4, 6, 8]


def test_cross_rule_needs_three_terms():
    with pytest.raises(IndexOutOfRange):
        cross_rule_table(SequencePrefix.from_values([1, 2]))


def _conditioning_flags(table, m, threshold):
    """Cells whose own differences, or any ancestor's, are tiny relative to their operands."""
    flags = {}
    for kappa in range(1, table.N + 1):
        for n in range(table.N - kappa + 1):
            k = kappa - 1
            parents = [(k - m, n + 1)] + [(k - m + i, row) for i in range(1, m + 1) for row in (n, n + 1)]
            flagged = any(flags.get(p, False) for p in parents)
            for i in range(1, m + 1):
                upper, lower = table.state(k - m + i, n + 1), table.state(k - m + i, n)
                if not (upper.is_valid and lower.is_valid):
                    flagged = True
                    continue
                scale = max(abs(upper.value), abs(lower.value), 1)
                if abs(upper.value - lower.value) < threshold * scale:
                    flagged = True
            flags[(kappa, n)] = flagged
    return flags


@pytest.mark.parametrize("m", [1, 2, 3])
def test_float_mode_tracks_exact_oracle(m):
    mode = float_mode(128)
    tol = mode.context.mpf(10) ** -20
    compared = 0
    for seq in random_sweep(count=10):
        exact = multistep_epsilon(seq, m)
        flags = _conditioning_flags(exact, m, Fraction(1, 100))
        approx = multistep_epsilon(seq.with_mode(mode), m)
        oracle = DeterminantOracle(seq, m)
        for (kappa, n), cell in approx.iter_cells():
            if kappa < 1 or flags.get((kappa, n), True) or not cell.is_valid:
                continue
            try:
                target = mode.coerce(epsilon_entry_det(seq, m, kappa, n, oracle))
            except Breakdown:
                continue
            assert abs(cell.value - target) <= tol * max(abs(target), 1)
            compared += 1
    assert compared > 0
