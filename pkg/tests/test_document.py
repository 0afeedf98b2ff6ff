import pytest
import tomli

from holefield.classify import ALL_LABELS, classify
from holefield.document import DocumentError, dump_document, load_document, parse_vector
from holefield.kvmodel import Catalog
from holefield.series import monomial
from holefield.spaces import dual, make_space
from holefield.valgroup import NormValue, parse_exponent
from holefield.witness import MODES, VIOLATING_LABELS, build_witness, violating_witness

DOC = """
[options]
depth = 12

[[generator]]
id = "g1"
kind = "basic"
level = "1"
family = 1

[[generator]]
id = "g2"
family = 2

[[generator]]
id = "n1"
kind = "nested"
outer = "g1"
inner = "g2"

[space.W]
scales = ["theta"]
basis = [["1"], ["g1"], ["n1"]]
"""


def test_load_example():
    doc = load_document(DOC)
    assert doc.options == {"depth": 12}
    assert [g.id for g in doc.catalog] == ["g1", "g2", "n1"]
    P = doc.spaces["W"]
    assert P.scales == (NormValue(parse_exponent("theta")),)
    assert str(classify(P).type) == "V_3"


@pytest.mark.parametrize("label", ALL_LABELS, ids=str)
@pytest.mark.parametrize("mode", MODES)
def test_witness_round_trip(label, mode):
    W = build_witness(label, mode)
    text = dump_document(W.catalog, {"W": W.space})
    doc = load_document(text)
    assert doc.spaces["W"] == W.space
    assert dump_document(doc.catalog, doc.spaces) == text


@pytest.mark.parametrize("label", VIOLATING_LABELS, ids=str)
def test_violating_round_trip(label):
    W = violating_witness(label)
    text = dump_document(W.catalog, {"W": W.space})
    doc = load_document(text)
    assert doc.spaces["W"] == W.space
    assert classify(doc.spaces["W"]).type == label


def test_dual_declares_fresh_generators():
    W = build_witness("III_3", "offgroup")
    D = dual(W.space)
    text = dump_document(W.catalog, {"D": D})
    doc = load_document(text)
    assert doc.spaces["D"] == D
    assert str(classify(doc.spaces["D"]).type) == "IV_3"


def test_coefficients_with_spaces_are_parenthesized():
    cat = Catalog()
    g1 = cat.add_basic("g1", 1, 1).element()
    P = make_space(["0"], [[1], [g1 * monomial(2, 0) + g1 * monomial(1, 1)]])
    text = dump_document(cat, {"P": P})
    assert ")*g1" in text
    assert load_document(text).spaces["P"] == P


def test_toml_syntax_error_has_position():
    with pytest.raises(tomli.TOMLDecodeError) as e:
        load_document("[space.W\nscales = 1")
    assert "line" in str(e.value)


@pytest.mark.parametrize("text,where", [
    ('[[generator]]\nkind = "basic"\nfamily = 1', "generator[0]"),
    ('[[generator]]\nid = "g1"\nkind = "odd"\nfamily = 1', "generator[0]"),
    ('[[generator]]\nid = "n"\nkind = "nested"\nouter = "g1"\ninner = "g2"', "generator[0]"),
    ('[space.W]\nscales = ["0"]', "space.W"),
    ('[space.W]\nscales = ["0"]\nbasis = [["1"], ["g9"]]', "space.W"),
    ('[space.W]\nscales = ["0"]\nbasis = [["1"], ["2"]]', "space.W"),
])
def test_document_errors_name_the_block(text, where):
    with pytest.raises(DocumentError, match=where.replace("[", r"\[").replace("]", r"\]")):
        load_document(text)


def test_parse_vector():
    doc = load_document(DOC)
    assert len(parse_vector("(1, g1)", doc.catalog)) == 2
    assert len(parse_vector("g1", doc.catalog)) == 1
    with pytest.raises(DocumentError):
        parse_vector("(1, g7)", doc.catalog)
