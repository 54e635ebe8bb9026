from __future__ import annotations

import enum
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


class Infinity(str, enum.Enum):
    """Signed infinity returned by degree/valuation of the zero polynomial."""

    NEG = "-inf"
    POS = "+inf"


NEG_INFINITY = Infinity.NEG
POS_INFINITY = Infinity.POS


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a finite decimal into an exact rational."""
    cleaned = text.strip()
    if not cleaned:
        raise ValueError("empty rational")
    if any(marker in cleaned.lower() for marker in ("inf", "nan", "e")):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(cleaned)


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
