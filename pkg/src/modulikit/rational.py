"""Canonical text form for exact rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, str]


def parse_rational(text: Number) -> Fraction:
    """Parse ``"p/q"``, an integer string, or a number into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def fmt(q: Number) -> str:
    """Render as ``p/q`` with q > 0 and gcd 1; integers render with ``/1``."""
    f = parse_rational(q)
    return f"{f.numerator}/{f.denominator}"
