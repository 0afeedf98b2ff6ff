import pytest

from holefield.classify import ALL_LABELS, classify
from holefield.holes import residue_orthogonal
from holefield.kvmodel import Catalog
from holefield.spaces import make_space
from holefield.witness import (
    MODES,
    VIOLATING_LABELS,
    ConstructionFailed,
    build_witness,
    norms_off_group,
    orthogonal_family,
    residue_lift,
    violating_witness,
    witness_space,
)


@pytest.mark.parametrize("k", [1, 2, 3, 8])
def test_orthogonal_family(k):
    gens = orthogonal_family(k)
    assert len(gens) == k
    assert len({g.family for g in gens}) == k
    assert residue_orthogonal([g.element() for g in gens])


def test_orthogonal_family_bounds():
    with pytest.raises(ValueError):
        orthogonal_family(9)


def test_residue_lift_pair():
    c = Catalog()
    c.add_basic("g1", 1, 1)
    c.add_basic("g2", 1, 2)
    (z,) = residue_lift(c, "g1", ["g2"])
    P = make_space(["0"], [[1], [c["g1"].element()], [z]])
    assert str(classify(P).type) == "V_3"


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("label", ALL_LABELS, ids=str)
def test_round_trip(label, mode):
    W = build_witness(label, mode)
    assert classify(W.space).type == label
    if mode == "offgroup":
        assert norms_off_group(W.space)


def test_v3_offgroup_satisfies_se():
    assert classify(witness_space("V_3", "offgroup")).se


def test_xvii_ingroup_fails_se():
    assert not classify(witness_space("XVII_4", "ingroup")).se


def test_i4_is_K4():
    P = witness_space("I_4", "ingroup")
    assert P.n == P.m == 4 and all(x.in_K() for row in P.basis for x in row)


@pytest.mark.parametrize("label", VIOLATING_LABELS, ids=str)
def test_violating_witnesses(label):
    W = violating_witness(label)
    r = classify(W.space)
    assert r.type == label
    assert norms_off_group(W.space)
    assert not r.se


def test_violating_unknown_label():
    with pytest.raises(ConstructionFailed):
        violating_witness("I_3")
