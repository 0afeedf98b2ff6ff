# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the series kernels in ``_pykernels``.

Exponent numerators are 64-bit integers here; callers fall back to the
pure-Python kernels when a numerator would overflow.
"""


def convolve(list ea, list ca, list eb, list cb, bound):
    cdef Py_ssize_t i, j, na = len(ea), nb = len(eb)
    cdef long long e1, e, bnd = 0
    cdef bint has_bound = bound is not None
    cdef dict acc = {}
    if has_bound:
        bnd = bound
    cdef long long[:] vb
    import array
    arr = array.array("q", eb)
    vb = arr
    for i in range(na):
        e1 = ea[i]
        c1 = ca[i]
        for j in range(nb):
            e = e1 + vb[j]
            if has_bound and e >= bnd:
                break
            key = e
            prev = acc.get(key)
            if prev is None:
                acc[key] = c1 * cb[j]
            else:
                acc[key] = prev + c1 * cb[j]
    exps = sorted([k for k, c in acc.items() if c != 0])
    return exps, [acc[k] for k in exps]


def merge_add(list ea, list ca, list eb, list cb, bound):
    cdef Py_ssize_t i = 0, j = 0, na = len(ea), nb = len(eb)
    cdef long long x, y, e, bnd = 0
    cdef bint has_bound = bound is not None
    if has_bound:
        bnd = bound
    out_e = []
    out_c = []
    while i < na or j < nb:
        if j >= nb:
            e = ea[i]; c = ca[i]; i += 1
        elif i >= na:
            e = eb[j]; c = cb[j]; j += 1
        else:
            x = ea[i]; y = eb[j]
            if x < y:
                e = x; c = ca[i]; i += 1
            elif y < x:
                e = y; c = cb[j]; j += 1
            else:
                e = x; c = ca[i] + cb[j]; i += 1; j += 1
        if has_bound and e >= bnd:
            break
        if c != 0:
            out_e.append(e)
            out_c.append(c)
    return out_e, out_c
