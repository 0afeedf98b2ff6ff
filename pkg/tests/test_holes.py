from fractions import Fraction as F

import pytest

from holefield.holes import NotAHole, NotEquivalent, equiv, equiv_scale, residue_dist, residue_orthogonal
from holefield.kvmodel import Catalog, KvElement
from holefield.oracle import CertifiedNo, equiv_bounded
from holefield.series import monomial
from holefield.valgroup import ONE, ZERO, NormValue


def test_equiv_examples(g):
    assert equiv(g[1], g[1] * 5 + KvElement(monomial(1, 2)))
    assert not equiv(g[1], g[2])
    assert isinstance(equiv_bounded(g[1], g[2], 12), CertifiedNo)
    assert equiv(g[1], g[1] * monomial(1, 1))


def test_equiv_rejects_K(g):
    with pytest.raises(NotAHole):
        equiv(KvElement(3), g[1])


def test_equiv_scale(g):
    assert equiv_scale(g[1], g[1] * monomial(1, 1)) == NormValue.pos(1)
    assert equiv_scale(g[1], g[1]) == ONE
    assert equiv_scale(g[1] * monomial(1, F(1, 2)), g[1]) == NormValue.pos(F(-1, 2))
    with pytest.raises(NotEquivalent):
        equiv_scale(g[1], g[2])


def test_residue_orthogonal(g):
    assert residue_orthogonal([g[1], g[2]])
    assert not residue_orthogonal([g[1], g[2], g[1] + g[2]])
    assert residue_orthogonal([g[1]])


def test_residue_dist(g):
    d = residue_dist(g[1], [g[2]])
    assert (d.value, d.attained) == (NormValue.pos(1), False)
    d = residue_dist(g[1] + g[2], [g[1], g[2]])
    assert (d.value, d.attained) == (ZERO, True)


def test_residue_dist_nested():
    c = Catalog()
    c.add_basic("g1", 1, 1)
    c.add_basic("g2", 1, 2)
    n = c.add_nested("n", "g1", "g2").element()
    d = residue_dist(n, [c["g1"].element()])
    # inner limit 1 on top of the outer level 1
    assert (d.value, d.attained) == (NormValue.pos(2), False)
