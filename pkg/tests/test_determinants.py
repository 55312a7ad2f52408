from __future__ import annotations

from fractions import Fraction

import pytest

from mseps.determinants import (
    DeterminantOracle,
    bareiss_determinant,
    cofactor_determinant,
    determinant,
    determinant_scale,
    extended_h,
    hankel,
    hankel_difference_forms,
    lattice_position,
    phi,
)
from mseps.errors import IndexOutOfRange
from mseps.identities import random_matrix
from mseps.numerics import RATIONAL, SequencePrefix, difference_sequence, float_mode


def test_hankel_of_ln2(ln2):
    assert hankel(ln2, 0, 1) == 1
    assert hankel(ln2, 0, 2) == Fraction(7, 12)


def test_extended_h_of_ln2(ln2):
    assert extended_h(ln2, 0, 2, 2) == -1
    assert extended_h(difference_sequence(ln2, 3), 0, 1, 2) == Fraction(-17, 12)


def test_phi_index_row():
    u = SequencePrefix.from_values([1, "1/2"])
    assert phi(u, 0, 2, 1) == -1
    assert phi(u, 5, 1, 1) == 5


def test_size_conventions(ln2):
    for fn in (lambda k: hankel(ln2, 0, k), lambda k: extended_h(ln2, 0, k, 2), lambda k: phi(ln2, 0, k, 2)):
        assert fn(0) == 1
        assert fn(-1) == 0


def test_short_prefix_is_out_of_range(ln2):
    with pytest.raises(IndexOutOfRange):
        hankel(ln2, 4, 4)
    with pytest.raises(IndexOutOfRange):
        extended_h(ln2, 0, 4, 2)
    with pytest.raises(IndexOutOfRange):
        phi(ln2, 2, 5, 1)


def test_bareiss_matches_cofactors(rng):
    for size in range(1, 5):
        for _ in range(10):
            matrix = random_matrix(rng, size)
            assert bareiss_determinant(matrix) == cofactor_determinant(matrix)


def test_bareiss_singular_and_pivoting():
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[1, 2], [2, 4]]) == 0
    assert bareiss_determinant([[Fraction(1, 2), 0, 0], [0, 0, 3], [0, Fraction(1, 3), 0]]) == Fraction(-1, 2)


def test_float_determinant_tracks_exact(rng):
    mode = float_mode(128)
    for size in (3, 5):
        matrix = random_matrix(rng, size)
        exact = determinant(matrix)
        approx = determinant(matrix, mode)
        assert abs(approx - mode.coerce(exact)) <= mode.context.mpf(10) ** -30 * max(1, abs(mode.coerce(exact)))


def test_hankel_difference_forms_agree(sweep):
    for seq in sweep[:10]:
        for k in range(0, 5):
            plain, rows, both = hankel_difference_forms(seq, 1, k)
            assert plain == rows == both


def test_lattice_position():
    assert lattice_position(1, 1) == (1, 1)
    assert lattice_position(2, 1) == (1, 2)
    assert lattice_position(3, 2) == (1, 3)
    assert lattice_position(4, 2) == (2, 1)
    assert lattice_position(0, 2) == (0, 3)


def test_oracle_caches_and_matches_free_functions(ln2):
    oracle = DeterminantOracle(ln2, 2)
    assert oracle.H(2, 0, 0) == extended_h(ln2, 0, 2, 2)
    assert oracle.Phi(2, 1, 0) == phi(difference_sequence(ln2, 1), 0, 2, 2)
    assert oracle.hankel(2, 0, 0) == Fraction(7, 12)
    assert oracle.H(-1, 3, 0) == 0
    assert oracle.H(0, 3, 0) == 1
    assert len(oracle._values) == 5


def test_oracle_rejects_bad_step(ln2):
    with pytest.raises(ValueError):
        DeterminantOracle(ln2, 0)


def test_determinant_scale_bounds_the_determinant(rng):
    mode = float_mode(128)
    assert determinant_scale([[3, 4], [0, 1]], RATIONAL) == 1
    assert determinant_scale([[3, 4], [0, 1]], mode) == 5
    for size in (2, 4, 6):
        matrix = [[mode.coerce(x) for x in row] for row in random_matrix(rng, size)]
        assert abs(determinant(matrix, mode)) <= determinant_scale(matrix, mode)


def test_oracle_keeps_the_scale_of_each_determinant(ln2):
    mode = float_mode(128)
    oracle = DeterminantOracle(ln2.with_mode(mode), 2)
    assert oracle.H_scale(0, 1, 0) == 1
    assert abs(oracle.H(2, 1, 0)) <= oracle.H_scale(2, 1, 0)
    assert lattice_position(4, 2) == (2, 1)
    assert oracle.F_scale(4, 0) == oracle.H_scale(2, 1, 0)
