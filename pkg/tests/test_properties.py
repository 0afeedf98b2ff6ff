from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from holefield.holes import equiv, equiv_scale, residue_orthogonal
from holefield.kvmodel import KvElement, dist_to_K, kv_norm
from holefield.oracle import CertifiedNo, dist_bounds, equiv_bounded
from holefield.series import monomial, s_add, s_mul, s_valuation
from holefield.spaces import canonicalize, distance, make_space, vec_norm
from holefield.valgroup import ONE, nv_in_VK

from strategies import GENS, exact_series, holes, nonzero_series, norm_values, pos_values

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


# valgroup

@given(pos_values, pos_values, pos_values)
def test_order_respects_product(x, y, z):
    if x < y:
        assert x * z < y * z


@given(pos_values, pos_values)
def test_value_group_is_subgroup(x, y):
    if nv_in_VK(x) and nv_in_VK(y):
        assert nv_in_VK(x * y) and nv_in_VK(x.inverse())


@given(norm_values, norm_values)
def test_product_commutes(x, y):
    assert x * y == y * x


@given(pos_values)
def test_inverse(x):
    assert x * x.inverse() == ONE


# series

@given(exact_series(), exact_series())
def test_ultrametric(x, y):
    s = s_add(x, y)
    if x.is_zero() or y.is_zero() or s.is_zero():
        return
    vx, vy = s_valuation(x), s_valuation(y)
    assert s_valuation(s) >= min(vx, vy)
    if vx != vy:
        assert s_valuation(s) == min(vx, vy)


@given(nonzero_series, nonzero_series)
def test_norm_multiplicative(x, y):
    assert s_mul(x, y).norm() == x.norm() * y.norm()


@given(exact_series(), exact_series(), exact_series())
def test_ring_laws(x, y, z):
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


# kvmodel

@SETTINGS
@given(holes(), nonzero_series, exact_series())
def test_distance_scale_law(x, lam, mu):
    assert dist_to_K(x * lam + KvElement(mu))[0] == lam.norm() * dist_to_K(x)[0]


@SETTINGS
@given(nonzero_series, nonzero_series, exact_series())
def test_catalog_pair_distance(lam, mu, nu):
    g, h = GENS[0], GENS[1]
    x = g * lam + h * mu + KvElement(nu)
    want = max(lam.norm() * dist_to_K(g)[0], mu.norm() * dist_to_K(h)[0])
    assert dist_to_K(x)[0] == want


# holes

@SETTINGS
@given(holes(), holes(), holes())
def test_equivalence_relation(x, y, z):
    assert equiv(x, x)
    assert equiv(x, y) == equiv(y, x)
    if equiv(x, y) and equiv(y, z):
        assert equiv(x, z)


@SETTINGS
@given(holes(), holes(), exact_series())
def test_ball_stability(x, y, k):
    # z = x + k with |k| <= d(x, K)
    r = dist_to_K(x)[0]
    assume(k.is_zero() or k.norm() <= r)
    assert equiv(x + KvElement(k), y) == equiv(x, y)


@SETTINGS
@given(holes(), holes())
def test_pair_criterion(x, y):
    assert equiv(x, y) == (not residue_orthogonal([x, y]))


@SETTINGS
@given(holes(), holes())
def test_scale_coherence(x, y):
    if equiv(x, y):
        assert equiv_scale(x, y) * equiv_scale(y, x) == ONE


@SETTINGS
@given(holes(), holes())
def test_bounded_refutation_is_sound(x, y):
    if isinstance(equiv_bounded(x, y, 12), CertifiedNo):
        assert not equiv(x, y)


# spaces

def _two_dim(a, b):
    return make_space(["0", "theta"], [[1, 0], [a, b]])


@SETTINGS
@given(holes(), holes())
def test_canonical_witness_preserves_norms(a, b):
    try:
        P = _two_dim(a, b)
    except ValueError:
        return
    cf = canonicalize(P)
    assert cf.witness.check(samples=10)


@SETTINGS
@given(holes(), holes(), exact_series())
def test_oracle_brackets_distance(a, b, c):
    v = [KvElement(c) + a, b]
    D = [[KvElement(1), KvElement()], [a, KvElement(1)]]
    dd = distance(v, D, ["0", "0"])
    lo, hi = dist_bounds(v, D, ["0", "0"], 8)
    assert lo <= dd.value <= hi


@SETTINGS
@given(holes(), st.integers(2, 6))
def test_refinement_never_widens(a, k):
    v, D = [a, GENS[2]], [[KvElement(1), KvElement()]]
    lo1, hi1 = dist_bounds(v, D, ["0", "0"], k)
    lo2, hi2 = dist_bounds(v, D, ["0", "0"], k + 4)
    assert lo1 <= lo2 and hi2 <= hi1


@SETTINGS
@given(holes(), nonzero_series)
def test_vec_norm_is_homogeneous(a, lam):
    v = [a, KvElement(1)]
    w = [x * lam for x in v]
    assert vec_norm(w, ["0", "theta"]) == lam.norm() * vec_norm(v, ["0", "theta"])
