"""Exact truncated Puiseux-type series over the rationals.

A :class:`TruncSeries` is a finite list of terms ``c * t^e`` with strictly
increasing rational exponents plus a precision ``p``: the value is known
modulo ``t^p``.  Precision ``None`` means the series is exact.  The absolute
value is ``|x| = e^{-v(x)}`` where ``v`` is the least exponent.

>>> x = parse_series("1 + t")
>>> y = parse_series("1 - t")
>>> str(x * y)
'1 - t^2'
>>> str(s_invert(y, 3))
'1 + t + t^2 + O(t^3)'
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from . import _kernels
from .valgroup import NormValue, ZERO

__all__ = [
    "TruncSeries",
    "AboveBound",
    "s_add",
    "s_mul",
    "s_invert",
    "s_valuation",
    "parse_series",
    "monomial",
]

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class AboveBound:
    """Valuation of an inexact zero: only known to be at least ``bound``."""

    bound: Fraction


def _lcm_denominators(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


class TruncSeries:
    """Immutable truncated series ``sum c_i t^{e_i} + O(t^prec)``."""

    __slots__ = ("terms", "prec", "_hash")

    def __init__(self, terms: Iterable[tuple[Rational, Rational]] = (), prec: Rational | None = None):
        p = None if prec is None else Fraction(prec)
        acc: dict[Fraction, Fraction] = {}
        for e, c in terms:
            e = Fraction(e)
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        self.terms = tuple(
            (e, acc[e]) for e in sorted(acc) if acc[e] != 0 and (p is None or e < p)
        )
        self.prec = p
        self._hash = None

    @classmethod
    def _raw(cls, terms: tuple, prec: Fraction | None) -> TruncSeries:
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.prec = prec
        obj._hash = None
        return obj

    # -- basic queries -------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """True for the exact zero."""
        return not self.terms and self.prec is None

    def valuation(self) -> Fraction | AboveBound | float:
        return s_valuation(self)

    def leading(self) -> tuple[Fraction, Fraction]:
        if not self.terms:
            raise ValueError("series has no known leading term")
        return self.terms[0]

    def norm(self) -> NormValue:
        """``e^{-v}``; raises if the value is an inexact zero."""
        if self.terms:
            return NormValue.from_valuation(self.terms[0][0])
        if self.prec is None:
            return ZERO
        raise ValueError("norm of an inexact zero is undetermined")

    def coefficient(self, e: Rational) -> Fraction:
        e = Fraction(e)
        for x, c in self.terms:
            if x == e:
                return c
        return Fraction(0)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: TruncSeries | Rational) -> TruncSeries:
        if not isinstance(other, (TruncSeries, int, Fraction)):
            return NotImplemented
        return s_add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> TruncSeries:
        return TruncSeries._raw(tuple((e, -c) for e, c in self.terms), self.prec)

    def __sub__(self, other: TruncSeries | Rational) -> TruncSeries:
        if not isinstance(other, (TruncSeries, int, Fraction)):
            return NotImplemented
        return s_add(self, -_coerce(other))

    def __rsub__(self, other: Rational) -> TruncSeries:
        return s_add(_coerce(other), -self)

    def __mul__(self, other: TruncSeries | Rational) -> TruncSeries:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return s_mul(self, other)

    __rmul__ = __mul__

    def scale(self, c: Rational) -> TruncSeries:
        c = Fraction(c)
        if c == 0:
            return ZERO_SERIES if self.prec is None else TruncSeries._raw((), self.prec)
        return TruncSeries._raw(tuple((e, c * x) for e, x in self.terms), self.prec)

    def shift(self, e: Rational) -> TruncSeries:
        """Multiply by ``t^e``."""
        e = Fraction(e)
        return TruncSeries._raw(
            tuple((x + e, c) for x, c in self.terms), None if self.prec is None else self.prec + e
        )

    def truncate(self, prec: Rational | None) -> TruncSeries:
        """Forget everything at or above ``t^prec``."""
        if prec is None:
            return self
        p = Fraction(prec)
        if self.prec is not None and self.prec <= p:
            return self
        return TruncSeries._raw(tuple(t for t in self.terms if t[0] < p), p)

    def exact_part(self) -> TruncSeries:
        """The known terms viewed as an exact finite series."""
        return TruncSeries._raw(self.terms, None)

    # -- comparisons and display ---------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = _coerce(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.terms == other.terms and self.prec == other.prec

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.terms, self.prec))
        return self._hash

    def __repr__(self) -> str:
        return f"TruncSeries({str(self)!r})"

    def __str__(self) -> str:
        return format_series(self)


def _coerce(x: TruncSeries | Rational) -> TruncSeries:
    if isinstance(x, TruncSeries):
        return x
    x = Fraction(x)
    return TruncSeries._raw(((Fraction(0), x),) if x else (), None)


ZERO_SERIES = TruncSeries._raw((), None)
ONE_SERIES = TruncSeries._raw(((Fraction(0), Fraction(1)),), None)


def monomial(c: Rational, e: Rational = 0) -> TruncSeries:
    """The exact series ``c * t^e``."""
    return TruncSeries([(e, c)])


def _min_prec(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _to_ints(x: TruncSeries, d: int) -> tuple[list[int], list[Fraction]]:
    return [int(e * d) for e, _ in x.terms], [c for _, c in x.terms]


def s_add(x: TruncSeries, y: TruncSeries) -> TruncSeries:
    """Termwise sum; the precision is the smaller of the two."""
    prec = _min_prec(x.prec, y.prec)
    if not y.terms and not x.terms:
        return TruncSeries._raw((), prec)
    vals = [e for e, _ in x.terms] + [e for e, _ in y.terms]
    if prec is not None:
        vals.append(prec)
    d = _lcm_denominators(vals)
    ea, ca = _to_ints(x, d)
    eb, cb = _to_ints(y, d)
    bound = None if prec is None else int(prec * d)
    exps, coeffs = _kernels.merge_add(ea, ca, eb, cb, bound)
    return TruncSeries._raw(tuple((Fraction(e, d), c) for e, c in zip(exps, coeffs)), prec)


def _prec_of_product(x: TruncSeries, y: TruncSeries) -> Fraction | None:
    cands = []
    if x.prec is not None:
        if y.terms:
            cands.append(y.terms[0][0] + x.prec)
        elif y.prec is not None:
            cands.append(y.prec + x.prec)
        # an exact zero factor makes the product exactly zero
    if y.prec is not None:
        if x.terms:
            cands.append(x.terms[0][0] + y.prec)
        elif x.prec is not None:
            cands.append(x.prec + y.prec)
    if x.is_zero() or y.is_zero():
        return None
    return min(cands) if cands else None


def s_mul(x: TruncSeries, y: TruncSeries) -> TruncSeries:
    """Product with precision ``min(v(x) + prec(y), v(y) + prec(x))``."""
    if x.is_zero() or y.is_zero():
        return ZERO_SERIES
    prec = _prec_of_product(x, y)
    if not x.terms or not y.terms:
        return TruncSeries._raw((), prec)
    vals = [e for e, _ in x.terms] + [e for e, _ in y.terms]
    if prec is not None:
        vals.append(prec)
    d = _lcm_denominators(vals)
    ea, ca = _to_ints(x, d)
    eb, cb = _to_ints(y, d)
    bound = None if prec is None else int(prec * d)
    exps, coeffs = _kernels.convolve(ea, ca, eb, cb, bound)
    return TruncSeries._raw(tuple((Fraction(e, d), c) for e, c in zip(exps, coeffs)), prec)


def s_invert(x: TruncSeries, target_precision: Rational) -> TruncSeries:
    """Inverse of ``x`` modulo ``t^target_precision``.

    Uses Newton iteration on the normalized unit ``1 + u``; raises
    ``ZeroDivisionError`` on the exact zero and ``ValueError`` when ``x`` has
    no known leading term or too little precision for the target.
    """
    if x.is_zero():
        raise ZeroDivisionError("inverse of the exact zero")
    if not x.terms:
        raise ValueError("cannot invert a series with unknown leading term")
    target = Fraction(target_precision)
    v, c = x.terms[0]
    # x = c t^v (1 + u) with v(u) > 0 ; 1/x = c^-1 t^-v (1 + u)^-1
    unit = x.shift(-v).scale(1 / c)
    rel = target + v  # precision needed for (1+u)^-1
    if unit.prec is not None and unit.prec < rel:
        raise ValueError("input precision too low for requested inverse precision")
    if rel <= 0:
        return TruncSeries._raw((), target)
    unit = unit.truncate(rel)
    inv = ONE_SERIES.truncate(min(rel, _first_gap(unit)))
    # Newton: y <- y (2 - unit*y); doubles the known precision each step
    while inv.prec is not None and inv.prec < rel:
        new_prec = min(rel, 2 * inv.prec)
        y = inv.exact_part()
        corr = s_mul(unit, y).exact_part().truncate(new_prec)
        step = s_mul(y, (2 - corr).exact_part()).exact_part()
        inv = step.truncate(new_prec)
    return inv.shift(-v).scale(1 / c).truncate(target)


def _first_gap(unit: TruncSeries) -> Fraction:
    """Valuation of ``unit - 1``, i.e. the precision of the guess ``1``."""
    for e, c in unit.terms:
        if e > 0:
            return e
    return unit.prec if unit.prec is not None else Fraction(10**9)


def s_valuation(x: TruncSeries) -> Fraction | AboveBound | float:
    """Least exponent; ``AboveBound(prec)`` for an inexact zero, ``inf`` for 0."""
    if x.terms:
        return x.terms[0][0]
    if x.prec is None:
        return math.inf
    return AboveBound(x.prec)


# ---------------------------------------------------------------------------
# text grammar

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
    (?:
      O\(\s*t\s*(?:\^\s*(?P<oexp>\(?\s*-?\d+(?:/\d+)?\s*\)?))?\s*\)
    |
      (?P<coef>\d+(?:/\d+)?)?\s*(?P<star>\*)?\s*
      (?P<t>t\s*(?:\^\s*(?P<exp>\(\s*-?\d+(?:/\d+)?\s*\)|-?\d+))?)?
    )""",
    re.VERBOSE,
)


def _num(text: str) -> Fraction:
    return Fraction(text.strip().strip("()").replace(" ", ""))


def parse_series(text: str) -> TruncSeries:
    """Parse a sum of ``c*t^(p/q)`` terms with an optional ``O(t^(p/q))``.

    >>> str(parse_series("3*t^(1/2) + t^2 - 1/5*t^(7/3) + O(t^3)"))
    '3*t^(1/2) + t^2 - 1/5*t^(7/3) + O(t^3)'
    """
    src = text.strip()
    if not src:
        raise ValueError("empty series")
    terms: list[tuple[Fraction, Fraction]] = []
    prec: Fraction | None = None
    pos = 0
    first = True
    while pos < len(src):
        m = _TERM.match(src, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse series at column {pos + 1}: {text!r}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator at column {pos + 1}: {text!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group(0).strip().lstrip("+-").strip().startswith("O("):
            prec = _num(m.group("oexp")) if m.group("oexp") else Fraction(1)
        else:
            coef, tpart = m.group("coef"), m.group("t")
            if coef is None and tpart is None:
                raise ValueError(f"cannot parse series at column {pos + 1}: {text!r}")
            if m.group("star") and (coef is None or tpart is None):
                raise ValueError(f"dangling '*' at column {pos + 1}: {text!r}")
            c = _num(coef) if coef else Fraction(1)
            e = Fraction(0)
            if tpart:
                e = _num(m.group("exp")) if m.group("exp") else Fraction(1)
            terms.append((e, sign * c))
        first = False
        pos = m.end()
        while pos < len(src) and src[pos].isspace():
            pos += 1
    return TruncSeries(terms, prec)


def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    return f"({e})"


def format_series(x: TruncSeries) -> str:
    parts: list[str] = []
    for e, c in x.terms:
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = "t" if e == 1 else f"t^{_fmt_exp(e)}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    if x.prec is not None:
        parts.append(("+", "O(t)" if x.prec == 1 else f"O(t^{_fmt_exp(x.prec)})"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
