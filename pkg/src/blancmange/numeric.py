"""Exact rationals and rational interval enclosures.

``Rational`` is :class:`fractions.Fraction`, which already keeps itself in
lowest terms with a positive denominator, so equality is structural.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError

Rational = Fraction
RationalLike = Union[int, Fraction, str]

_RAT_RE = re.compile(r"\s*(-?\d+)(?:/(\d+))?\s*\Z")


def rat_parse(text: str) -> Fraction:
    """Parse ``"[-]digits"`` or ``"[-]digits/digits"`` into a canonical rational.

    >>> rat_parse("2/4")
    Fraction(1, 2)
    """
    match = _RAT_RE.match(text)
    if match is None:
        raise DomainError(f"malformed rational {text!r}: expected 'p' or 'p/q'")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise DomainError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def rat_str(q: Fraction) -> str:
    """Canonical serialization: ``"p/q"``, or ``"p"`` when integral."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and rational strings. Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise DomainError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return rat_parse(x)
    raise DomainError(f"cannot use {type(x).__name__} as an exact rational")


def frac_mod1(t: Fraction) -> Fraction:
    """Fractional part ``t - floor(t)``, always in ``[0, 1)``."""
    return t - math.floor(t)


@dataclass(frozen=True)
class Enclosure:
    """Closed interval ``[lo, hi]`` with rational endpoints known to hold a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Fraction) -> Enclosure:
        return cls(x, x)

    @classmethod
    def around(cls, center: Fraction, radius: Fraction) -> Enclosure:
        if radius < 0:
            raise DomainError("negative radius")
        return cls(center - radius, center + radius)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: Enclosure | Fraction | int) -> Enclosure:
        if isinstance(other, Enclosure):
            return Enclosure(self.lo + other.lo, self.hi + other.hi)
        return Enclosure(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self) -> Enclosure:
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other: Enclosure | Fraction | int) -> Enclosure:
        return self + (-other)

    def __rsub__(self, other: Fraction | int) -> Enclosure:
        return (-self) + other

    def scale(self, k: Fraction | int) -> Enclosure:
        """Multiply by an exact scalar; a negative scalar swaps the endpoints."""
        a, b = self.lo * k, self.hi * k
        return Enclosure(min(a, b), max(a, b))

    def abs(self) -> Enclosure:
        """Enclosure of ``|x|`` for ``x`` in this enclosure."""
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(Fraction(0), max(-self.lo, self.hi))

    def to_json(self) -> dict:
        return {"lo": rat_str(self.lo), "hi": rat_str(self.hi)}

    @classmethod
    def from_json(cls, obj: dict) -> Enclosure:
        return cls(rat_parse(obj["lo"]), rat_parse(obj["hi"]))


def enclosure_contains(e: Enclosure, x: Fraction) -> bool:
    return e.contains(x)


def enclosure_max(encs) -> Enclosure:
    """Enclosure of ``max(x_i)`` given enclosures of each ``x_i``."""
    encs = list(encs)
    if not encs:
        raise DomainError("maximum of an empty collection")
    return Enclosure(max(e.lo for e in encs), max(e.hi for e in encs))
