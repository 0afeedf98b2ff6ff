from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holefield import _kernels, _pykernels

pytestmark = pytest.mark.skipif(not _kernels.COMPILED, reason="compiled kernels not built")

terms = st.lists(st.tuples(st.integers(-10**6, 10**6), st.integers(-50, 50).filter(bool)),
                 max_size=30, unique_by=lambda t: t[0]).map(sorted)
bounds = st.one_of(st.none(), st.integers(-10**6, 2 * 10**6))


def split(ts):
    return [e for e, _ in ts], [Fraction(c, 3) for _, c in ts]


@settings(max_examples=200, deadline=None)
@given(terms, terms, bounds)
def test_convolve_agrees(a, b, bound):
    from holefield import _ckernels
    assert _ckernels.convolve(*split(a), *split(b), bound) == _pykernels.convolve(*split(a), *split(b), bound)


@settings(max_examples=200, deadline=None)
@given(terms, terms, bounds)
def test_merge_add_agrees(a, b, bound):
    from holefield import _ckernels
    assert _ckernels.merge_add(*split(a), *split(b), bound) == _pykernels.merge_add(*split(a), *split(b), bound)


def test_dispatch_falls_back_on_huge_exponents():
    big = [2**70]
    assert _kernels.convolve(big, [Fraction(1)], [1], [Fraction(2)], None) == ([2**70 + 1], [Fraction(2)])
