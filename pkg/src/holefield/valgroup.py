"""Norm magnitudes of the form ``e^{-(a + b*theta)}`` with ``theta = sqrt(2)``.

Every scale factor, distance and norm handled by the library lives in the
multiplicative group ``{e^{-(a + b*theta)} : a rational, b integer}`` together
with a distinguished zero.  The valuation group of the base field is the
subgroup with ``b == 0``; the single irrational direction ``theta`` is what
lets a scale sit outside it.

>>> from fractions import Fraction
>>> x = NormValue.pos(1)
>>> y = NormValue.pos(0, 1)
>>> x > y          # e^-1 > e^-sqrt(2)
True
>>> (x * y).exponent
Exponent(a=Fraction(1, 1), b=1)
>>> x.in_vk(), y.in_vk()
(True, False)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

__all__ = [
    "Exponent",
    "NormValue",
    "ZERO",
    "ONE",
    "nv_mul",
    "nv_cmp",
    "nv_in_VK",
    "parse_exponent",
]

Rational = Union[int, Fraction]


def _sign(x: Fraction | int) -> int:
    return (x > 0) - (x < 0)


@total_ordering
@dataclass(frozen=True)
class Exponent:
    """The real number ``a + b*sqrt(2)`` with ``a`` rational and ``b`` integral."""

    a: Fraction
    b: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        if int(self.b) != self.b:
            raise ValueError("theta coefficient must be an integer")
        object.__setattr__(self, "b", int(self.b))

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(2)``.

        When the two parts disagree in sign the comparison ``a^2`` versus
        ``2 b^2`` decides, which never ties because sqrt(2) is irrational.
        """
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        lhs = self.a * self.a
        rhs = 2 * self.b * self.b
        return sa if lhs > rhs else sb

    def __add__(self, other: Exponent) -> Exponent:
        return Exponent(self.a + other.a, self.b + other.b)

    def __sub__(self, other: Exponent) -> Exponent:
        return Exponent(self.a - other.a, self.b - other.b)

    def __neg__(self) -> Exponent:
        return Exponent(-self.a, -self.b)

    def __lt__(self, other: Exponent) -> bool:
        return (self - other).sign() < 0

    def __float__(self) -> float:
        return float(self.a) + self.b * math.sqrt(2.0)

    def is_rational(self) -> bool:
        return self.b == 0

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*theta"
        sep = "+" if self.b > 0 else "-"
        return f"{self.a}{sep}{abs(self.b)}*theta"


_TERM_RE = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*theta)?")


def parse_exponent(text: str) -> Exponent:
    """Parse ``"a"`` or ``"a+b*theta"`` (``a``, ``b`` written as ``p/q``).

    >>> parse_exponent("3/2-2*theta")
    Exponent(a=Fraction(3, 2), b=-2)
    >>> parse_exponent("theta")
    Exponent(a=Fraction(0, 1), b=1)
    """
    src = text.strip()
    pos = 0
    a = Fraction(0)
    b = Fraction(0)
    seen = False
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TERM_RE.match(src, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse exponent {text!r}")
        if seen and not m.group(1):
            raise ValueError(f"missing sign between terms in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        value = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            b += sign * value
        else:
            a += sign * value
        seen = True
        pos = m.end()
    if not seen:
        raise ValueError(f"cannot parse exponent {text!r}")
    if b.denominator != 1:
        raise ValueError(f"theta coefficient must be an integer in {text!r}")
    return Exponent(a, int(b))


@total_ordering
class NormValue:
    """Either zero or ``e^{-exp}`` for an :class:`Exponent` ``exp``.

    Ordered as real numbers, so a larger exponent means a smaller value.
    """

    __slots__ = ("_exp",)

    def __init__(self, exp: Exponent | None) -> None:
        self._exp = exp

    @classmethod
    def pos(cls, a: Rational = 0, b: int = 0) -> NormValue:
        return cls(Exponent(Fraction(a), b))

    @classmethod
    def from_valuation(cls, v: Rational) -> NormValue:
        """The absolute value of a series of valuation ``v``."""
        return cls(Exponent(Fraction(v), 0))

    @property
    def is_zero(self) -> bool:
        return self._exp is None

    @property
    def exponent(self) -> Exponent:
        if self._exp is None:
            raise ValueError("zero has no exponent")
        return self._exp

    def __mul__(self, other: NormValue) -> NormValue:
        if self._exp is None or other._exp is None:
            return ZERO
        return NormValue(self._exp + other._exp)

    def __truediv__(self, other: NormValue) -> NormValue:
        if other._exp is None:
            raise ZeroDivisionError("division by the zero norm")
        if self._exp is None:
            return ZERO
        return NormValue(self._exp - other._exp)

    def inverse(self) -> NormValue:
        return ONE / self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NormValue):
            return NotImplemented
        return self._exp == other._exp

    def __hash__(self) -> int:
        return hash(self._exp)

    def __lt__(self, other: NormValue) -> bool:
        if self._exp is None:
            return other._exp is not None
        if other._exp is None:
            return False
        return other._exp < self._exp

    def in_vk(self) -> bool:
        """Whether the value is the absolute value of a nonzero field element."""
        if self._exp is None:
            raise ValueError("0 is not in the valuation group")
        return self._exp.b == 0

    def coset(self) -> int:
        """The theta coefficient, which labels the coset modulo the valuation group."""
        return self.exponent.b

    def __float__(self) -> float:
        return 0.0 if self._exp is None else math.exp(-float(self._exp))

    def __repr__(self) -> str:
        if self._exp is None:
            return "Zero"
        return f"Pos({self._exp.a}, {self._exp.b})"

    def __str__(self) -> str:
        if self._exp is None:
            return "0"
        return f"e^-({self._exp})"

    def to_text(self) -> str:
        """Serialize as the exponent grammar (``"0"`` denotes the value 1)."""
        return str(self.exponent)


ZERO = NormValue(None)
ONE = NormValue(Exponent(Fraction(0), 0))


def nv_mul(x: NormValue, y: NormValue) -> NormValue:
    return x * y


def nv_cmp(x: NormValue, y: NormValue) -> str:
    """Three-way comparison returning ``"LT"``, ``"EQ"`` or ``"GT"``."""
    if x == y:
        return "EQ"
    return "LT" if x < y else "GT"


def nv_in_VK(x: NormValue) -> bool:
    return x.in_vk()
