"""Rational parsing, formatting, and half-integrality predicates."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bcrforest.errors import FormatError
from bcrforest.rationals import (
    format_ratio,
    format_rational,
    is_half_integral_value,
    parse_rational,
)


def test_parse_integer_and_fraction():
    assert parse_rational("3") == 3
    assert parse_rational("-2") == -2
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("-7/4") == Fraction(-7, 4)


@pytest.mark.parametrize("bad", ["1.5", "2e3", "abc", "1/0", ""])
def test_parse_rejects_non_rationals(bad):
    with pytest.raises(FormatError):
        parse_rational(bad)


def test_format_styles():
    assert format_rational(Fraction(4)) == "4"
    assert format_rational(Fraction(3, 2)) == "3/2"
    assert format_ratio(Fraction(4)) == "4/1"
    assert format_ratio(Fraction(-3, 2)) == "-3/2"


@given(st.fractions())
def test_round_trip(value):
    assert parse_rational(format_rational(value)) == value
    assert parse_rational(format_ratio(value)) == value


@given(st.integers(min_value=-50, max_value=50))
def test_half_integrality(n):
    assert is_half_integral_value(Fraction(n, 2))
    assert not is_half_integral_value(n + Fraction(1, 3))
