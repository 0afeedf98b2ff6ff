from fractions import Fraction as F

import pytest

from holefield.kvmodel import (
    Catalog,
    InvalidGenerator,
    KvElement,
    UnknownGenerator,
    dist_to_K,
    epsilon,
    expand,
    kv_norm,
    parse_element,
    prime,
)
from holefield.series import monomial, parse_series
from holefield.valgroup import ONE, ZERO, NormValue


def schedule(level, p, n):
    """Exponents level - 1/(k^2 + p) for k = 1..n, written out directly."""
    return [F(level) - F(1, k * k + p) for k in range(1, n + 1)]


def test_primes():
    assert [prime(j) for j in range(1, 7)] == [2, 3, 5, 7, 11, 13]


def test_expand_basic_against_schedule(g):
    s = expand(g[1], 2)
    ex = schedule(1, 2, 3)
    assert [e for e, _ in s.terms] == ex[:2]
    assert all(c == 1 for _, c in s.terms)
    assert s.prec == ex[2]


def test_expand_exact_and_shifted(g):
    s = expand(KvElement(monomial(1, 2)), 5)
    assert s.is_exact and s == parse_series("t^2")
    ex = [e + F(1, 2) for e in schedule(1, 2, 2)]
    s = expand(g[1] * monomial(1, F(1, 2)), 1)
    assert [e for e, _ in s.terms] == ex[:1] and s.prec == ex[1]


def test_epsilon_matches_schedule():
    # offset below the accumulation level
    assert [epsilon(3, n) for n in range(1, 6)] == [-F(1, n * n + 5) for n in range(1, 6)]


def test_norm(g):
    assert kv_norm(g[1]) == NormValue.pos(F(2, 3))
    assert kv_norm(KvElement()) == ZERO
    assert kv_norm(g[1] + 1) == ONE


def test_dist_to_K(g):
    assert dist_to_K(g[1]) == (NormValue.pos(1), False)
    assert dist_to_K(KvElement(parse_series("t^2 + 3*t"))) == (ZERO, True)
    assert dist_to_K(g[1] * monomial(1, F(1, 2)) + 7) == (NormValue.pos(F(3, 2)), False)


def test_dist_scale_law(g):
    lam, mu = parse_series("-2*t^(-1/3) + t"), parse_series("5*t^(-2)")
    x = g[2] + g[3] * 4
    assert dist_to_K(x * lam + KvElement(mu))[0] == lam.norm() * dist_to_K(x)[0]


def test_orthogonal_pair_distance(g):
    lam, mu = monomial(3, F(-1, 2)), monomial(-1, 1)
    x = g[1] * lam + g[2] * mu + 9
    assert dist_to_K(x)[0] == max(lam.norm() * dist_to_K(g[1])[0], mu.norm() * dist_to_K(g[2])[0])


def test_nested_level():
    c = Catalog()
    c.add_basic("g1", 1, 1)
    c.add_basic("g2", 1, 2)
    n = c.add_nested("n", "g1", "g2").element()
    d, att = dist_to_K(n)
    assert not att and d.exponent.b == 0


def test_catalog_errors():
    c = Catalog()
    c.add_basic("g1", 1, 1)
    with pytest.raises(InvalidGenerator):
        c.add_basic("g1", 1, 2)
    with pytest.raises(UnknownGenerator):
        c.add_nested("n", "g1", "nope")
    with pytest.raises(UnknownGenerator):
        parse_element("g9", c)


def test_hole_product_rejected(g):
    with pytest.raises(TypeError):
        g[1] * g[2]


def test_parse_element_roundtrip(cat, g):
    x = parse_element("-1/3 + 2*t*g1 + (t + t^2)*g2", cat)
    assert x == KvElement(F(-1, 3)) + g[1] * monomial(2, 1) + g[2] * parse_series("t + t^2")
    assert x.generators() and not x.in_K()
