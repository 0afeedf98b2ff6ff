"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from holefield.kvmodel import Catalog, KvElement
from holefield.series import TruncSeries, monomial
from holefield.valgroup import Exponent, NormValue

fractions = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 12))
exponents = st.builds(Exponent, fractions, st.integers(-6, 6))
pos_values = st.builds(NormValue, exponents)
norm_values = st.one_of(pos_values, st.just(NormValue(None)))

nonzero_coeffs = st.builds(Fraction, st.integers(-9, 9).filter(bool), st.integers(1, 5))


@st.composite
def exact_series(draw, max_terms=4, nonzero=False):
    terms = draw(st.lists(st.tuples(fractions, nonzero_coeffs), min_size=1 if nonzero else 0,
                          max_size=max_terms))
    acc = TruncSeries._raw((), None)
    for e, c in terms:
        acc = acc + monomial(c, e)
    if nonzero and acc.is_zero():
        acc = monomial(draw(nonzero_coeffs), draw(fractions))
    return acc


nonzero_series = exact_series(nonzero=True)


def catalog() -> Catalog:
    c = Catalog()
    for j in range(1, 5):
        c.add_basic(f"g{j}", 1, j)
    c.add_basic("h5", "1-theta", 5)
    c.add_nested("n12", "g1", "g2")
    return c


CAT = catalog()
GENS = [g.element() for g in CAT]


@st.composite
def holes(draw, max_gens=2):
    """``K``-combinations of catalog generators with a nonzero hole part."""
    k = draw(st.integers(1, max_gens))
    idx = draw(st.lists(st.integers(0, len(GENS) - 1), min_size=k, max_size=k, unique=True))
    x = KvElement(draw(exact_series(max_terms=2)))
    for i in idx:
        c = monomial(draw(nonzero_coeffs), draw(st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))))
        x = x + GENS[i] * c
    return x
