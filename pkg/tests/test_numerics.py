from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from mseps.errors import IndexOutOfRange, ParseError
from mseps.numerics import (
    RATIONAL,
    ScalarMode,
    SequencePrefix,
    ZeroPolicy,
    classify_literal,
    default_zero_policy,
    difference_sequence,
    float_mode,
    format_scalar,
    forward_difference,
    forward_difference_recursive,
    is_effectively_zero,
    parse_scalar,
)

small_fractions = st.fractions(min_value=-10, max_value=10, max_denominator=12)


def test_parse_rational_literals():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("-2") == Fraction(-2)
    assert parse_scalar(" 6/-4 ") == Fraction(-3, 2)


def test_rational_mode_rejects_decimals():
    with pytest.raises(ParseError):
        parse_scalar("0.5", RATIONAL)
    with pytest.raises(ParseError):
        parse_scalar("1/0")
    with pytest.raises(ParseError):
        parse_scalar("abc")


def test_classify_literal():
    assert classify_literal("12/7") == "rational"
    assert classify_literal("1.25e-3") == "float"


def test_float_mode_parses_decimals():
    mode = float_mode(128)
    value = parse_scalar("0.5", mode)
    assert value == mode.context.mpf(1) / 2
    assert parse_scalar("1/3", mode) == mode.context.mpf(1) / 3


def test_precision_floor():
    with pytest.raises(ValueError):
        ScalarMode(20)


def test_format_scalar():
    assert format_scalar(Fraction(7, 12), RATIONAL) == "7/12"
    assert format_scalar(Fraction(4, 2), RATIONAL) == "2"
    mode = float_mode(64)
    assert format_scalar(mode.coerce(Fraction(1, 4)), mode) == "0.25"


def test_sequence_prefix_coerces_and_indexes():
    seq = SequencePrefix.from_values([1, "1/2", Fraction(5, 6)])
    assert seq.N == 2
    assert seq[1] == Fraction(1, 2)
    with pytest.raises(IndexOutOfRange):
        seq[3]
    with pytest.raises(IndexError):
        seq[-1]


def test_forward_difference_of_ln2(ln2):
    assert forward_difference(ln2, 0, 4) == ln2[4]
    assert forward_difference(ln2, 1, 0) == Fraction(-1, 2)
    assert forward_difference(ln2, 2, 0) == Fraction(5, 6)
    assert forward_difference(ln2, 3, 0) == Fraction(-17, 12)


def test_binomial_and_recursive_differences_agree(ln2):
    for order in range(ln2.N + 1):
        for start in range(ln2.N - order + 1):
            assert forward_difference(ln2, order, start) == forward_difference_recursive(ln2, order, start)


def test_difference_out_of_range(ln2):
    with pytest.raises(IndexOutOfRange):
        forward_difference(ln2, 3, ln2.N - 2)
    with pytest.raises(IndexOutOfRange):
        difference_sequence(ln2, ln2.N + 1)


def test_difference_sequence_shape(ln2):
    d2 = difference_sequence(ln2, 2)
    assert len(d2) == len(ln2) - 2
    assert d2[0] == Fraction(5, 6)


@settings(max_examples=50, deadline=None)
@given(st.lists(small_fractions, min_size=5, max_size=8), small_fractions, small_fractions)
def test_difference_is_linear_and_kills_constants(values, a, b):
    seq = SequencePrefix.from_values(values)
    moved = seq.affine(a, b)
    for order in range(1, seq.N + 1):
        assert forward_difference(moved, order, 0) == a * forward_difference(seq, order, 0)


def test_zero_policy_rational_is_exact():
    policy = default_zero_policy(RATIONAL)
    assert is_effectively_zero(Fraction(0), Fraction(1), policy)
    assert not is_effectively_zero(Fraction(1, 10**30), Fraction(1), policy)


def test_zero_policy_float_is_relative():
    mode = float_mode(128)
    policy = default_zero_policy(mode)
    ctx = mode.context
    assert is_effectively_zero(ctx.mpf(10) ** -25, ctx.mpf(1), policy)
    assert is_effectively_zero(ctx.mpf(10) ** -10, ctx.mpf(10) ** 20, policy)
    assert not is_effectively_zero(ctx.mpf(10) ** -5, ctx.mpf(1), policy)


def test_float_zero_policy_needs_thresholds():
    with pytest.raises(ValueError):
        ZeroPolicy(float_mode(64))


@settings(max_examples=30, deadline=None)
@given(st.lists(small_fractions, min_size=2, max_size=6))
def test_mode_switch_preserves_values(values):
    assume(any(values))
    seq = SequencePrefix.from_values(values)
    mode = float_mode(200)
    lifted = seq.with_mode(mode)
    for exact, approx in zip(seq, lifted):
        assert abs(mode.coerce(exact) - approx) == 0


def test_mode_helpers():
    assert RATIONAL.parse("2/4") == Fraction(1, 2)
    assert RATIONAL.default_policy() == default_zero_policy(RATIONAL)
    mode = float_mode(80)
    assert mode.default_policy().tau > 0
    assert str(mode) == "float@80"
    assert str(RATIONAL) == "rational"
