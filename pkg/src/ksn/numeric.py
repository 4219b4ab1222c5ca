"""Numeric modes and exact number parsing / formatting."""

from __future__ import annotations

import enum
from fractions import Fraction
from numbers import Rational


class NumericMode(str, enum.Enum):
    FLOAT = "float64"
    RATIONAL = "rational"

    @classmethod
    def coerce(cls, value) -> "NumericMode":
        if isinstance(value, cls):
            return value
        if isinstance(value, bool):
            return cls.RATIONAL if value else cls.FLOAT
        v = str(value).lower()
        if v in ("float", "float64"):
            return cls.FLOAT
        if v in ("rational", "exact", "exactrational", "fraction"):
            return cls.RATIONAL
        raise ValueError(f"unknown numeric mode {value!r}")


def parse_number(text: str, mode: NumericMode):
    """Parse a decimal or ``p/q`` literal. Decimals are exact in rational mode."""
    s = text.strip()
    if not s:
        raise ValueError("empty number")
    q = Fraction(s)
    if mode is NumericMode.RATIONAL:
        return q
    if "/" in s:
        return float(q)
    return float(s)


def convert(value, mode: NumericMode):
    """Bring ``value`` into the representation used by ``mode``."""
    if mode is NumericMode.RATIONAL:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, Rational)):
            return Fraction(value)
        if isinstance(value, float):
            # shortest decimal, so 0.1 means 1/10 and not the binary neighbour
            return Fraction(repr(value))
        return Fraction(str(value))
    return float(value)


def format_number(value, mode: NumericMode, digits: int | None = None) -> str:
    """Canonical text for a number: ``p/q`` when exact, shortest round trip otherwise."""
    if mode is NumericMode.RATIONAL:
        q = Fraction(value)
        return f"{q.numerator}/{q.denominator}"
    x = float(value)
    if digits is None:
        return repr(x)
    return f"{x:.{digits}g}"


def format_exact(value) -> str:
    """Human text for an exact number, integers without a denominator."""
    q = Fraction(value)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def decimal_or_fraction(q: Fraction) -> str:
    """Terminating decimal when one exists, ``p/q`` otherwise."""
    q = Fraction(q)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    if q.denominator == 1:
        return str(q.numerator)
    places = max(twos, fives)
    scaled = q * 10**places
    assert scaled.denominator == 1
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}".rstrip("0").rstrip(".")
