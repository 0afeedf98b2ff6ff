"""Pure-Python series kernels, used when the compiled module is unavailable.

Exponents are passed as integer numerators over a denominator shared by both
operands, so the inner loops never build ``Fraction`` exponents.
"""

from __future__ import annotations


def convolve(ea, ca, eb, cb, bound):
    """Sparse product of two sorted term lists, keeping exponents ``< bound``.

    ``bound`` is ``None`` for no truncation.  Returns sorted ``(exps, coeffs)``
    with zero coefficients removed.
    """
    acc = {}
    nb = len(eb)
    for i in range(len(ea)):
        e1 = ea[i]
        c1 = ca[i]
        for j in range(nb):
            e = e1 + eb[j]
            if bound is not None and e >= bound:
                # eb is increasing, so the rest of this row is out of range
                break
            acc[e] = acc.get(e, 0) + c1 * cb[j]
    exps = sorted(e for e, c in acc.items() if c != 0)
    return exps, [acc[e] for e in exps]


def merge_add(ea, ca, eb, cb, bound):
    """Sum of two sorted term lists, keeping exponents ``< bound``."""
    out_e = []
    out_c = []
    i = j = 0
    na, nb = len(ea), len(eb)
    while i < na or j < nb:
        if j >= nb or (i < na and ea[i] < eb[j]):
            e, c = ea[i], ca[i]
            i += 1
        elif i >= na or eb[j] < ea[i]:
            e, c = eb[j], cb[j]
            j += 1
        else:
            e, c = ea[i], ca[i] + cb[j]
            i += 1
            j += 1
        if bound is not None and e >= bound:
            break
        if c != 0:
            out_e.append(e)
            out_c.append(c)
    return out_e, out_c
