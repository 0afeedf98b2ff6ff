from fractions import Fraction as F

import pytest

from holefield.series import (
    AboveBound,
    ONE_SERIES,
    ZERO_SERIES,
    TruncSeries,
    monomial,
    parse_series,
    s_add,
    s_invert,
    s_mul,
    s_valuation,
)


def S(text):
    return parse_series(text)


def test_add():
    assert s_add(S("1 + t"), S("-1 + t^2")) == S("t + t^2")
    z = s_add(S("t^(1/2)"), S("-t^(1/2)"))
    assert z.is_zero() and z.is_exact
    assert s_add(S("1 + O(t^2)"), S("t^2")) == S("1 + O(t^2)")


def test_mul():
    assert s_mul(S("1 + t"), S("1 - t")) == S("1 - t^2")
    assert s_mul(S("t^(1/2)"), S("t^(1/3)")) == S("t^(5/6)")
    assert s_mul(S("1 + O(t)"), S("t^2")) == S("t^2 + O(t^3)")


def _geometric(prec):
    """1/(1-t) written out term by term."""
    return [(F(k), F(1)) for k in range(prec)]


def test_invert_against_geometric_series():
    inv = s_invert(S("1 - t"), 3)
    assert list(inv.terms) == _geometric(3)
    assert inv.prec == 3
    prod = s_mul(inv, S("1 - t"))
    assert prod.truncate(3) == ONE_SERIES.truncate(3)


def test_invert_simple():
    inv = s_invert(S("t"), 2)
    assert inv.terms[0] == (F(-1), F(1)) and len(inv.terms) == 1
    assert s_invert(S("2"), 1).terms == ((F(0), F(1, 2)),)
    with pytest.raises(ZeroDivisionError):
        s_invert(ZERO_SERIES, 2)


def test_valuation():
    assert s_valuation(S("t^(1/2) + t")) == F(1, 2)
    assert s_valuation(ZERO_SERIES) == float("inf")
    v = s_valuation(S("O(t^3)"))
    assert isinstance(v, AboveBound) and v.bound == 3


def test_parse_roundtrip():
    x = S("3*t^(1/2) + t^2 - 1/5*t^(7/3)")
    assert parse_series(str(x)) == x
    assert monomial(F(-1, 5), F(7, 3)) == S("-1/5*t^(7/3)")
