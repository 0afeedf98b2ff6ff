import random

import pytest

from holefield.classify import (
    ALL_LABELS,
    TypeLabel,
    classify,
    classify2,
    dual_type,
    hyper_symmetric,
    isometric,
    parse_label,
    se,
)
from holefield.kvmodel import Catalog
from holefield.series import ONE_SERIES, ZERO_SERIES, monomial
from holefield.spaces import _combine, direct_sum, make_space, random_scalar
from holefield.witness import MODES, build_witness


def test_classify2(g):
    assert str(classify2(make_space(["0", "0"], [[1, 0], [0, 1]]))) == "OrthBase"
    h = classify2(make_space(["0"], [[1], [g[1]]]))
    h_shift = classify2(make_space(["theta"], [[1], [g[1] * monomial(1, 1)]]))
    assert h.to_text() == "Hole([1*1], theta^0)"
    assert h_shift.to_text() == "Hole([1*1], theta^1)"


def test_classify3_examples(g):
    r = classify(make_space(["0", "0"], [[1, 0], [0, 1], [g[1], g[2]]]))
    assert str(r.type) == "III_3" and not r.decomposable
    assert str(classify(make_space(["0"], [[1], [g[1]], [g[2]]])).type) == "IV_3"


def test_classify3_v3_subtype():
    c = Catalog()
    g1 = c.add_basic("g1", 1, 1).element()
    c.add_basic("g2", 1, 2)
    n = c.add_nested("n", "g1", "g2").element()
    r = classify(make_space(["0"], [[1], [g1], [n]]))
    assert str(r.type) == "V_3"
    assert r.subtype.to_text() == "([1*1], [1*2], theta^0)"


def test_classify4_examples(g):
    assert str(classify(make_space(["0"], [[1], [g[1]], [g[2]], [g[3]]])).type) == "VIII_4"
    P = make_space(["0", "0"], [[1, 0], [0, 1], [g[1], g[2]], [g[3], g[4]]])
    assert str(classify(P).type) == "XVII_4"
    P = direct_sum(make_space(["0"], [[1], [g[1]]]), make_space(["0"], [[1], [g[2]]]))
    assert str(classify(P).type) == "VI_4"


def test_se_examples(g):
    assert se(make_space(["theta"], [[1], [g[1]]]))
    assert not se(make_space(["0"], [[1], [g[1]]]))
    for mode in MODES:
        assert se(build_witness("I_3", mode).space)
        assert se(build_witness("I_4", mode).space)


def test_dual_type_table():
    assert str(dual_type(parse_label("III_3"))) == "IV_3"
    assert str(dual_type(parse_label("XI_4"))) == "XVI_4"
    assert str(dual_type(parse_label("XVII_4"))) == "XVII_4"
    for L in ALL_LABELS:
        assert dual_type(dual_type(L)) == L


def test_hyper_symmetric(g):
    assert hyper_symmetric(build_witness("V_3").space)
    assert not hyper_symmetric(build_witness("IV_3").space)
    assert hyper_symmetric(make_space(["0"], [[1]]))


def test_isometric_verdicts(g):
    A = make_space(["0", "0", "theta"], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    B = make_space(["theta", "0", "0"], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert isometric(A, B).kind == "Yes"
    v = isometric(make_space(["0"], [[1], [g[1]]]), make_space(["0"], [[1], [g[2]]]))
    assert v.kind == "No"


def test_isometric_unknown_for_equal_subtypes():
    c = Catalog()
    g1 = c.add_basic("g1", 1, 1).element()
    c.add_basic("g2", 1, 2)
    c.add_basic("g2b", 2, 2)
    A = make_space(["0"], [[1], [g1], [c.add_nested("n", "g1", "g2").element()]])
    B = make_space(["0"], [[1], [g1], [c.add_nested("nb", "g1", "g2b").element()]])
    assert classify(A).subtype == classify(B).subtype
    v = isometric(A, B)
    assert v.kind == "Unknown" and "open problem" in v.reason


def test_report_schema(g):
    d = classify(make_space(["0", "0"], [[1, 0], [0, 1], [g[1], g[2]]])).to_dict()
    assert {"type", "rank", "decomposable", "se", "dual_type", "invariants"} <= set(d)
    assert d["dual_type"] == "IV_3"


def test_parse_label():
    assert parse_label("XVII_4") == TypeLabel(4, "XVII")
    with pytest.raises(ValueError):
        parse_label("XVIII_4")


def _containing_K_part(P, rng):
    """3-dim subspace holding both unit vectors and a random mix of the rest."""
    O, Z = ONE_SERIES, ZERO_SERIES
    rows = [[O, Z, Z, Z], [Z, O, Z, Z], [Z, Z, random_scalar(rng), random_scalar(rng)]]
    return make_space(P.scales, [_combine(P.basis, r, P.m) for r in rows])


@pytest.mark.parametrize("label,allowed,required", [
    ("XIV_4", {"II_3"}, {"II_3"}),
    ("XV_4", {"II_3", "III_3"}, {"II_3", "III_3"}),
    ("XVI_4", {"III_3"}, {"III_3"}),
    ("XVII_4", {"III_3"}, {"III_3"}),
])
def test_subspace_types(label, allowed, required):
    rng = random.Random(5)
    P = build_witness(label).space
    seen = set()
    for _ in range(10):
        try:
            seen.add(str(classify(_containing_K_part(P, rng)).type))
        except ValueError:
            continue
    assert seen <= allowed and required <= seen


@pytest.mark.parametrize("label", ["I_3", "IV_3", "V_3"])
@pytest.mark.parametrize("mode", MODES)
def test_se_through_quotients(label, mode):
    """(SE) holds iff every line quotient has it and no 2-dim rank-1 subspace has norms in the value group."""
    P = build_witness(label, mode).space
    from holefield.spaces import quotient
    rng = random.Random(3)
    quots = []
    for _ in range(3):
        u = _combine(P.basis, [random_scalar(rng) for _ in range(P.n)], P.m)
        quots.append(se(quotient(P, u)))
    cosets = {s.coset() for s in P.scales}
    rank1_pair_in_group = classify(P).rank < P.n and 0 in cosets
    assert se(P) == (all(quots) and not rank1_pair_in_group)
