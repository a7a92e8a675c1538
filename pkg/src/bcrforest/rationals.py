"""Exact rational values and their text form.

Every quantity in this package is a ``fractions.Fraction``: always in lowest
terms, positive denominator, exact comparison and hashing.  No floating point
appears anywhere.  The text form is ``p`` for integers and ``p/q`` otherwise.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FormatError

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def parse_rational(token: str) -> Fraction:
    """Parse ``p`` or ``p/q`` into a Fraction; reject anything else."""
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational literal {token!r}") from exc
    if "." in token or "e" in token.lower():
        raise FormatError(f"bad rational literal {token!r}: only p or p/q accepted")
    return value


def format_rational(value: Fraction) -> str:
    """Render a Fraction as ``p`` or ``p/q``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_ratio(value: Fraction) -> str:
    """Render a Fraction as ``p/q`` with the denominator always written."""
    return f"{value.numerator}/{value.denominator}"


def is_half_integral_value(value: Fraction) -> bool:
    """True when value is a multiple of one half."""
    return (2 * value).denominator == 1
