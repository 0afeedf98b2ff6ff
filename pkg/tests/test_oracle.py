import random
from fractions import Fraction as F

import pytest

from holefield.kvmodel import Catalog, KvElement, dist_to_K, expand, kv_norm, parse_element
from holefield.oracle import (
    CertifiedNo,
    ConsistentUpTo,
    ball_avoidance_check,
    best_approx,
    dist_bounds,
    dual_norm_check,
    equiv_bounded,
    mobius_check,
    xv_conjecture_probe,
    xv_corollary_check,
)
from holefield.series import monomial, parse_series
from holefield.spaces import distance, make_space
from holefield.valgroup import ZERO, NormValue, parse_exponent
from holefield.witness import build_witness


def eps(level, p, n):
    return F(level) - F(1, n * n + p)


def test_best_approx_schedule(g):
    approx, got = best_approx(g[1], 3)
    assert [e for e, _ in approx.terms] == [eps(1, 2, n) for n in (1, 2, 3)]
    assert got == NormValue.pos(eps(1, 2, 4))


def test_best_approx_exact():
    x = KvElement(parse_series("t^2"))
    approx, got = best_approx(x, 4)
    assert approx == parse_series("t^2") and got == ZERO


def test_best_approx_with_K_part(g):
    approx, got = best_approx(g[1] + KvElement(monomial(1, -1)), 1)
    assert approx == parse_series("t^(-1) + t^(2/3)")
    assert got == NormValue.pos(eps(1, 2, 2))


def test_best_approx_decreases(g):
    x = g[1] * 3 + g[2] * monomial(1, F(1, 2))
    prev = None
    for k in range(1, 8):
        _, got = best_approx(x, k)
        if prev is not None:
            assert got < prev
        assert dist_to_K(x)[0] < got
        prev = got


def test_dist_bounds_examples(g):
    assert dist_bounds([g[2]], [[1], [g[1]]], ["0"], 12) == (NormValue.pos(1), NormValue.pos(1))
    assert dist_bounds([g[1]], [[g[1]]], ["0"], 12) == (ZERO, ZERO)
    assert dist_bounds([g[1]], [], ["0"], 12) == (kv_norm(g[1]), kv_norm(g[1]))


def test_dist_bounds_monotone(g):
    v, D = [g[2], g[3]], [[1, 0], [g[1], 1]]
    lo4, hi4 = dist_bounds(v, D, ["0", "0"], 4)
    lo12, hi12 = dist_bounds(v, D, ["0", "0"], 12)
    assert lo4 <= lo12 and hi12 <= hi4


def test_equiv_bounded_examples(g):
    s = expand(g[1], 12)
    assert isinstance(equiv_bounded(s.exact_part(), g[2], 12), CertifiedNo)
    assert equiv_bounded(s, g[1], 12) == ConsistentUpTo(12)
    assert equiv_bounded(expand(g[1] * monomial(1, 1), 12), g[1], 12) == ConsistentUpTo(12)


def test_mobius_examples(g):
    x = g[1] * monomial(1, F(-2, 3))
    assert kv_norm(x) == NormValue.pos(0)
    rep = mobius_check(x, 0, 1, 1, 0)
    assert isinstance(rep.verdict, ConsistentUpTo) and rep.within_ball
    assert isinstance(mobius_check(g[1], 1, 0, 0, 1).verdict, ConsistentUpTo)
    assert isinstance(mobius_check(g[1], 1, 0, monomial(1, 1), 1).verdict, ConsistentUpTo)
    with pytest.raises(ZeroDivisionError):
        mobius_check(g[1], 1, 1, 1, 1)


def test_ball_avoidance(g):
    assert ball_avoidance_check([g[1], g[2]], depth=10, samples=20).ok
    ctrl = ball_avoidance_check([g[1], g[1] * monomial(1, 1)], depth=10, samples=20)
    assert ctrl.cond3_failures


def test_dual_norm_check_orthogonal_base():
    rep = dual_norm_check(make_space(["0", "theta"], [[1, 0], [0, 1]]), depth=1, samples=5)
    assert all(ex == lo for ex, lo in rep.entries)


def test_dual_norm_check_rank_n_minus_one(g):
    P = make_space(["0", "0"], [[1, 0], [0, 1], [g[1], g[2]]])
    rep = dual_norm_check(P, depth=16, samples=20)
    assert rep.within(NormValue.pos(F(-1, 10)))


def test_xv_properties():
    rep = xv_corollary_check(build_witness("XV_4").space)
    assert rep.ok, rep.details


def test_xv_probe_records_without_verdict():
    P = build_witness("XV_4").space
    got = xv_conjecture_probe(P, P)
    assert set(got) == {"scales_in_value_group", "x_and_z_equivalent", "three_dim_isometric", "isometric"}


def test_oracle_brackets_engine_on_random_instances(cat):
    rng = random.Random(4)
    gens = [cat[f"g{j}"].element() for j in range(1, 5)]
    checked = 0
    for _ in range(25):
        def entry():
            x = KvElement(monomial(rng.randint(-3, 3) or 1, F(rng.randint(-2, 2), 2)))
            if rng.random() < 0.6:
                x = x + rng.choice(gens) * monomial(rng.choice([1, -2, 3]), F(rng.randint(-1, 1), 2))
            return x
        D = [[entry(), entry()]]
        v = [entry(), entry()]
        try:
            dd = distance(v, D, ["0", "0"])
        except ValueError:
            continue
        lo, hi = dist_bounds(v, D, ["0", "0"], 12)
        assert lo <= dd.value <= hi
        checked += 1
    assert checked >= 20


def _rc():
    from holefield.suites import random_catalog
    return random_catalog()


def test_lower_bound_combines_kernel_vectors():
    # D is one vector with no K-vector in its span and v is orthogonal to it,
    # so d(v, D) = ||v|| = |t^(-4/3)| e^(-theta); the functional needs t^2
    # times a second kernel vector to reach it.
    c = _rc()
    x = lambda s: parse_element(s, c)
    v = [x("-t^(-4/3) + -3/2*t^(-1/2)*n12"), x("-2*t + 3*t^(-2)*g1")]
    D = [[x("-2*t^(1/3) + 3/2*t^2*h6"), x("-3/2*h6")]]
    want = NormValue(parse_exponent("-4/3+theta"))
    assert dist_bounds(v, D, ["theta", "theta"], 12) == (want, want)


def test_lower_bound_with_hole_products():
    # Reducing the t^(-1) entry needs |c| = e^4, which blows up the first
    # coordinate, so d = ||v|| = e^(1-theta).  Phi = -2 x_1 - 2 t^2 g3 x_0.
    c = _rc()
    x = lambda s: parse_element(s, c)
    v = [x("-t^2*g3"), x("-3*t^(-1)")]
    D = [[x("-2"), x("2*t^2*g3")]]
    want = NormValue(parse_exponent("-1+theta"))
    assert dist_bounds(v, D, ["theta", "theta"], 12) == (want, want)


def test_lower_bound_hole_in_pivot_of_v():
    # |c d_0| would have to reach e^1, forcing |c| = e^(3/2) in coordinate 1.
    c = _rc()
    x = lambda s: parse_element(s, c)
    v = [x("3/2*t^(-1)"), x("t^3*g2")]
    D = [[x("1/2*t^2 + -t^(-1/2)*g1"), x("1/2")]]
    want = NormValue(parse_exponent("-1"))
    assert dist_bounds(v, D, ["0", "0"], 12) == (want, want)
    assert distance(v, D, ["0", "0"]).value == want
