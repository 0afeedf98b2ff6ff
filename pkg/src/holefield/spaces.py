"""Finite-dimensional subspaces of ``(K^v)^m`` with scaled sup norms.

A presentation lists ambient scales ``s_1..s_m`` and a basis whose entries
are :class:`KvElement`; the norm of ``v`` is ``max_i s_i |v_i|``.  The exact
calculus rests on three tools:

* fraction-free elimination over exact series, which finds the vectors of a
  span whose entries all lie in ``K``;
* pivoted orthogonal bases of such K-subspaces and the reduction map ``T``
  sending ``w`` to its residual on the non-pivot columns together with the
  residues of its pivot coefficients; ``||T w|| = d(w, E_K)``;
* leading-term vectors, which decide orthogonality of a finite family.

Distances recurse through ``T``.  When a level of the recursion has no
vector with entries in ``K`` the oracle's bounds are used instead.
"""

from __future__ import annotations

import random
from itertools import combinations
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .kvmodel import (
    KvElement,
    dist_to_K,
    expand,
    family_level,
    kv_norm,
    leading_term,
    residues,
)
from .series import ONE_SERIES, ZERO_SERIES, TruncSeries, monomial, s_invert, s_mul
from .valgroup import ONE, ZERO, Exponent, NormValue, parse_exponent

__all__ = [
    "SpacePresentation",
    "CanonicalForm",
    "Isometry",
    "Decomposition",
    "Distance",
    "Unresolved",
    "UnsupportedFamily",
    "NotInSpace",
    "make_space",
    "vec_norm",
    "distance",
    "approximate",
    "approx_in_K",
    "is_orthogonal",
    "canonicalize",
    "spherical_rank",
    "quotient",
    "dual",
    "decompose",
    "is_attained",
    "direct_sum",
    "span_contains",
    "random_scalar",
]

Vector = tuple


class Unresolved(Exception):
    """The exact calculus cannot decide this instance."""


class UnsupportedFamily(Exception):
    """No explicit dual presentation is known for this space."""


class NotInSpace(ValueError):
    pass


# ---------------------------------------------------------------------------
# presentations


def _kv(x) -> KvElement:
    return x if isinstance(x, KvElement) else KvElement(x)


def _nv(x) -> NormValue:
    if isinstance(x, NormValue):
        return x
    if isinstance(x, Exponent):
        return NormValue(x)
    if isinstance(x, str):
        return NormValue(parse_exponent(x))
    return NormValue.pos(Fraction(x))


@dataclass(frozen=True)
class SpacePresentation:
    """``span(basis)`` inside ``(K^v)^m`` with the scaled sup norm.

    ``dual_of`` is set on results of :func:`dual`: ``basis[i]`` is then the
    functional dual to ``dual_of.basis[i]``.
    """

    scales: tuple
    basis: tuple
    dual_of: SpacePresentation | None = field(default=None, compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.scales)

    @property
    def n(self) -> int:
        return len(self.basis)

    dim = n

    def norm(self, v: Sequence) -> NormValue:
        return vec_norm(v, self.scales)

    def __str__(self) -> str:
        rows = ["(" + ", ".join(str(x) for x in b) + ")" for b in self.basis]
        sc = ", ".join(s.to_text() for s in self.scales)
        return f"[{', '.join(rows)}] scales ({sc})"


def make_space(scales: Iterable, basis: Iterable[Iterable], check: bool = True) -> SpacePresentation:
    """Build a presentation, coercing entries and checking independence.

    Scales may be :class:`NormValue`, :class:`Exponent` or exponent text
    (``"theta"`` denotes ``e^{-theta}``).
    """
    sc = tuple(_nv(s) for s in scales)
    if any(s.is_zero for s in sc):
        raise ValueError("scales must be nonzero")
    rows = tuple(tuple(_kv(x) for x in row) for row in basis)
    for row in rows:
        if len(row) != len(sc):
            raise ValueError("basis vector length differs from the number of scales")
    if check and rows and _nullspace([_slots(r) for r in rows]):
        raise ValueError("basis vectors are linearly dependent over K")
    return SpacePresentation(sc, rows)


def vec_norm(v: Sequence, scales) -> NormValue:
    """``max_i s_i |v_i|``."""
    if isinstance(scales, SpacePresentation):
        scales = scales.scales
    else:
        scales = [_nv(s) for s in scales]
    best = ZERO
    for x, s in zip(v, scales):
        x = _kv(x)
        if x.is_zero():
            continue
        val = kv_norm(x) * s
        if best < val:
            best = val
    return best


def direct_sum(p1: SpacePresentation, p2: SpacePresentation) -> SpacePresentation:
    """Block presentation of ``p1 (+) p2``; norms combine by max."""
    if p2.n == 0:
        return p1
    if p1.n == 0:
        return p2
    z1 = tuple(KvElement() for _ in range(p1.m))
    z2 = tuple(KvElement() for _ in range(p2.m))
    basis = [tuple(b) + z2 for b in p1.basis] + [z1 + tuple(b) for b in p2.basis]
    return SpacePresentation(p1.scales + p2.scales, tuple(basis))


# ---------------------------------------------------------------------------
# exact linear algebra over series


def _slots(v: Sequence[KvElement], atoms_only: bool = False) -> dict:
    out = {}
    for i, x in enumerate(v):
        if not atoms_only and not x.kpart.is_zero():
            out[(i, ())] = x.kpart
        for a, c in x.atoms().items():
            out[(i, a)] = c
    return out


def _monic(xs: list) -> list:
    """Divide a list of exact series by the leading monomial of its first entry."""
    for x in xs:
        if not x.is_zero():
            e, c = x.terms[0]
            return [y.shift(-e).scale(1 / c) if not y.is_zero() else y for y in xs]
    return xs


def _nullspace(cols: list[dict]) -> list[list[TruncSeries]]:
    """Basis of ``{c : sum_l c_l col_l = 0}`` by fraction-free elimination."""
    n = len(cols)
    keys = sorted(set().union(*cols), key=repr) if cols else []
    rows = [[col.get(k, ZERO_SERIES) for col in cols] for k in keys]
    rows = [r for r in rows if any(not x.is_zero() for x in r)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        rows[r] = _monic(rows[r])
        p = rows[r][c]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = _monic([p * a - f * b for a, b in zip(rows[i], rows[r])])
        pivots.append(c)
        r += 1
    out = []
    for f in range(n):
        if f in pivots:
            continue
        x = [ZERO_SERIES] * n
        total = ONE_SERIES
        for k in range(len(pivots)):
            total = total * rows[k][pivots[k]]
        x[f] = total
        for k, pc in enumerate(pivots):
            others = ONE_SERIES
            for k2 in range(len(pivots)):
                if k2 != k:
                    others = others * rows[k2][pivots[k2]]
            x[pc] = -(others * rows[k][f])
        out.append(_monic(x))
    return out


def _combine(vectors: Sequence[Sequence[KvElement]], coeffs: Sequence[TruncSeries], m: int) -> Vector:
    acc = [KvElement() for _ in range(m)]
    for v, c in zip(vectors, coeffs):
        if c.is_zero():
            continue
        for i in range(m):
            if not v[i].is_zero():
                acc[i] = acc[i] + v[i] * c
    return tuple(acc)


def _pivot_columns(rows: list[list[TruncSeries]], n: int) -> list[int]:
    """Pivot columns of the row space of ``rows`` (exact elimination)."""
    rows = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            if not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = _monic([p * a - f * b for a, b in zip(rows[i], rows[r])])
        piv.append(c)
        r += 1
    return piv


def span_contains(vectors: Sequence[Sequence], v: Sequence) -> list[TruncSeries] | None:
    """Coefficients ``c`` and ``d != 0`` with ``d v = sum c_l vectors_l``.

    Returns ``[d, c_1, ...]`` or ``None`` when ``v`` is not in the span.
    """
    vs = [tuple(_kv(x) for x in u) for u in vectors]
    v = tuple(_kv(x) for x in v)
    ker = _nullspace([_slots(v)] + [_slots(u) for u in vs])
    for k in ker:
        if not k[0].is_zero():
            return [k[0]] + [-c for c in k[1:]]
    return None


# ---------------------------------------------------------------------------
# leading vectors and orthogonality


def _lead(v: Sequence[KvElement], scales) -> tuple[NormValue, dict]:
    best = ZERO
    lead = {}
    for i, (x, s) in enumerate(zip(v, scales)):
        if x.is_zero():
            continue
        val = kv_norm(x) * s
        if best < val:
            best, lead = val, {}
        if val == best:
            lead[i] = leading_term(x)[1]
    return best, lead


def _rational_rank(vecs: list[dict]) -> int:
    rows = [dict(v) for v in vecs]
    rank = 0
    keys = sorted(set().union(*rows), key=repr) if rows else []
    for k in keys:
        pr = next((r for r in rows if r.get(k, 0) != 0), None)
        if pr is None:
            continue
        rows.remove(pr)
        rank += 1
        for r in rows:
            f = r.get(k, 0)
            if f:
                ratio = Fraction(f) / pr[k]
                for kk, val in pr.items():
                    r[kk] = r.get(kk, 0) - ratio * val
    return rank


def is_orthogonal(vectors: Sequence[Sequence], scales) -> bool:
    """Whether ``||sum c_i v_i|| = max |c_i| ||v_i||`` for all ``c``.

    Vectors whose norms differ by an element of the valuation group can
    cancel only through their leading vectors, so the family is orthogonal
    exactly when, within each coset class of norms, the leading vectors are
    linearly independent over the rationals.
    """
    if isinstance(scales, SpacePresentation):
        scales = scales.scales
    groups: dict[int, list[dict]] = {}
    for v in vectors:
        v = tuple(_kv(x) for x in v)
        nv, lead = _lead(v, scales)
        if nv.is_zero:
            return False
        groups.setdefault(nv.coset(), []).append(lead)
    return all(_rational_rank(g) == len(g) for g in groups.values())


def lead_vector(v: Sequence, scales) -> tuple[NormValue, dict]:
    """Norm and leading-coefficient vector of ``v``."""
    return _lead(tuple(_kv(x) for x in v), scales)


# ---------------------------------------------------------------------------
# approximation in K


def approx_in_K(x: KvElement, tol: NormValue) -> TruncSeries:
    """An exact ``c`` in ``K`` with ``|x - c| < tol``; needs ``tol > d(x, K)``."""
    x = _kv(x)
    if x.in_K():
        return x.kpart
    d, _ = dist_to_K(x)
    if not d < tol:
        raise ValueError("tolerance does not exceed the distance to K")
    depth = 4
    while True:
        s = expand(x, depth)
        if s.prec is None or NormValue.from_valuation(s.prec) < tol:
            return s.exact_part()
        depth *= 2


def _kdiv(num: TruncSeries, den: TruncSeries, tol: NormValue) -> TruncSeries:
    """An exact ``q`` with ``|num/den - q| < tol``."""
    if num.is_zero():
        return ZERO_SERIES
    if len(den.terms) == 1:
        e, c = den.terms[0]
        return num.shift(-e).scale(1 / c)
    v = num.terms[0][0]
    target = Fraction(int(float(tol.exponent)) + 2) - v if not tol.is_zero else Fraction(0)
    while True:
        q = s_mul(num, s_invert(den, target))
        if q.prec is None or NormValue.from_valuation(q.prec) < tol:
            return q.exact_part()
        target += 4


# ---------------------------------------------------------------------------
# K-subspaces and the reduction map


class _Reduction:
    """Orthogonal K-basis ``u_j`` with pivots ``p_j`` in echelon form.

    ``u_j`` vanishes at ``p_l`` for ``l < j`` and ``s_{p_j}|u_j[p_j]| =
    ||u_j||``, so the family is orthogonal and projection to the pivot
    columns is isometric on its span.  ``coeffs[j]`` expresses ``u_j`` in
    the spanning family it was built from.
    """

    def __init__(self, scales, kvecs: list[tuple[list, list]]):
        self.scales = scales
        self.m = len(scales)
        work = [(list(v), list(c)) for v, c in kvecs if any(not x.is_zero() for x in v)]
        self.u: list[list[TruncSeries]] = []
        self.piv: list[int] = []
        self.coeffs: list[list[TruncSeries]] = []
        while work:
            v, c = work.pop(0)
            best, p = ZERO, None
            for i, x in enumerate(v):
                if not x.is_zero():
                    val = x.norm() * scales[i]
                    if best < val:
                        best, p = val, i
            self.u.append(v)
            self.piv.append(p)
            self.coeffs.append(c)
            nxt = []
            for w, cw in work:
                a, b = v[p], w[p]
                if b.is_zero():
                    nw, ncw = w, cw
                else:
                    nw = [a * y - b * x for x, y in zip(v, w)]
                    ncw = [a * y - b * x for x, y in zip(c, cw)]
                if any(not x.is_zero() for x in nw):
                    nxt.append((nw, ncw))
            work = nxt
        self.k = len(self.u)
        self.norms = [max((x.norm() * s for x, s in zip(u, scales) if not x.is_zero()), default=ZERO)
                      for u in self.u]
        self.D = []
        acc = ONE_SERIES
        for u, p in zip(self.u, self.piv):
            acc = acc * u[p]
            self.D.append(acc)
        self.Dk = self.D[-1] if self.D else ONE_SERIES
        self.nonpivot = [i for i in range(self.m) if i not in self.piv]

    def _ratio(self, j_hi: int, j_lo: int) -> TruncSeries:
        """``D_{j_hi} / D_{j_lo}`` (product of the diagonal in between)."""
        acc = ONE_SERIES
        for i in range(j_lo + 1, j_hi + 1):
            acc = acc * self.u[i][self.piv[i]]
        return acc

    def split(self, w: Sequence[KvElement]) -> tuple[list[KvElement], list[KvElement]]:
        """``(D_k * r*, nu)`` with ``mu_j = nu_j / D_j`` and ``r* = w - sum mu_j u_j``."""
        nus: list[KvElement] = []
        for l in range(self.k):
            p = self.piv[l]
            prev = self._ratio(l - 1, -1) if l > 0 else ONE_SERIES
            acc = w[p] * prev
            for j in range(l):
                c = self.u[j][p]
                if not c.is_zero():
                    acc = acc - nus[j] * (self._ratio(l - 1, j) * c)
            nus.append(acc)
        rt = [x * self.Dk for x in w]
        for j in range(self.k):
            f = self._ratio(self.k - 1, j)
            for i in range(self.m):
                c = self.u[j][i]
                if not c.is_zero():
                    rt[i] = rt[i] - nus[j] * (f * c)
        return rt, nus

    def parts(self, w) -> tuple[NormValue, list[NormValue], list[KvElement]]:
        """``rho``, the per-pivot ``phi_j`` and the ``nu_j`` of ``w``."""
        rt, nus = self.split(w)
        dk = self.Dk.norm()
        rho = ZERO
        for i in self.nonpivot:
            if not rt[i].is_zero():
                val = kv_norm(rt[i]) * self.scales[i] / dk
                if rho < val:
                    rho = val
        phis = []
        for j, nu in enumerate(nus):
            d, _ = dist_to_K(nu)
            phis.append(d * self.norms[j] / self.D[j].norm())
        return rho, phis, nus

    def tmap(self, vectors: Sequence[Sequence[KvElement]]):
        """Presentation coordinates of ``T`` on ``vectors`` and their scales."""
        splits = [self.split(v) for v in vectors]
        dk = self.Dk.norm()
        scales = [self.scales[i] / dk for i in self.nonpivot]
        cols: list[list[KvElement]] = [[rt[i] for i in self.nonpivot] for rt, _ in splits]
        self.blocks = []
        for j in range(self.k):
            res = [residues(nus[j]) for _, nus in splits]
            fams = sorted(set().union(*[set(r) for r in res]), key=repr)
            base = self.norms[j] / self.D[j].norm()
            self.blocks.append(list(range(len(scales), len(scales) + len(fams))))
            for a in fams:
                scales.append(base * family_level(a))
                for col, r in zip(cols, res):
                    col.append(r.get(a, KvElement()))
        return [tuple(c) for c in cols], tuple(scales)


def _ksubspace(D: Sequence[Sequence[KvElement]], m: int):
    """Coefficient vectors of the K-vectors in ``span(D)`` and the vectors."""
    ker = _nullspace([_slots(d, atoms_only=True) for d in D])
    out = []
    for c in ker:
        v = _combine(D, c, m)
        out.append(([x.kpart for x in v], c))
    return out


def _complement(ker_coeffs: list[list[TruncSeries]], n: int) -> list[int]:
    piv = _pivot_columns(ker_coeffs, n)
    return [l for l in range(n) if l not in piv]


@dataclass(frozen=True)
class _Analysis:
    red: _Reduction
    comp: list[int]


def _analyse(D, scales) -> _Analysis | None:
    m = len(scales)
    ks = _ksubspace(D, m)
    if not ks:
        return None
    red = _Reduction(scales, ks)
    comp = _complement([c for _, c in ks], len(D))
    return _Analysis(red, comp)


# ---------------------------------------------------------------------------
# distance engine


class Distance(tuple):
    """``(value, attained)`` with ``attained`` in ``{True, False, None}``.

    ``exact`` is false when the value is only the upper end of the oracle's
    interval ``[lower, upper]``; ``via_oracle`` marks values outside the
    calculus that came from that interval at all.
    """

    def __new__(cls, value, attained, exact=True, lower=None, upper=None, via_oracle=False):
        obj = super().__new__(cls, (value, attained))
        obj.exact = exact
        obj.via_oracle = via_oracle
        obj.lower = value if lower is None else lower
        obj.upper = value if upper is None else upper
        return obj

    @property
    def value(self) -> NormValue:
        return self[0]

    @property
    def attained(self):
        return self[1]


def _dist(v, D, scales):
    """``(value, attained, minimizer)`` or ``None`` outside the calculus.

    The minimizer ``(den, coeffs)`` satisfies
    ``||den v - sum coeffs_l D_l|| = |den| value``; it is given only when
    ``attained`` is true.
    """
    if not D:
        return vec_norm(v, scales), True, (ONE_SERIES, [])
    an = _analyse(D, scales)
    if an is None:
        if is_orthogonal(list(D) + [v], scales):
            return vec_norm(v, scales), True, (ONE_SERIES, [ZERO_SERIES] * len(D))
        return None
    red = an.red
    comp = [D[l] for l in an.comp]
    imgs, tsc = red.tmap([v] + comp)
    inner = _dist(imgs[0], imgs[1:], tsc)
    if inner is None:
        return None
    val, att, mini = inner
    if att is not True:
        return val, att, None
    den2, c2 = mini
    w = list(x * den2 for x in v)
    for l, c in zip(an.comp, c2):
        for i in range(len(w)):
            w[i] = w[i] - D[l][i] * c
    dval = val * den2.norm() if not val.is_zero else ZERO
    rho, phis, nus = red.parts(w)
    nuhat = []
    for j, nu in enumerate(nus):
        if nu.in_K():
            nuhat.append(nu.kpart)
        elif phis[j] < dval:
            nuhat.append(approx_in_K(nu, dval * red.D[j].norm() / red.norms[j]))
        else:
            return val, (False if not comp else _block_attained(imgs, tsc, red.blocks, val)), None
    n = len(D)
    coeffs = [ZERO_SERIES] * n
    for l, c in zip(an.comp, c2):
        coeffs[l] = coeffs[l] + c * red.Dk
    for j in range(red.k):
        f = red._ratio(red.k - 1, j) * nuhat[j]
        for l in range(n):
            coeffs[l] = coeffs[l] + f * red.coeffs[j][l]
    return val, True, (den2 * red.Dk, coeffs)


def _block_attained(imgs, tsc, blocks, val):
    """Whether some minimizer leaves every residue block zero or below ``val``.

    Enumerates the set ``S`` of blocks forced to vanish; a block outside
    ``S`` with a coordinate fixed at norm ``val`` rules that choice out.
    """
    v0, D0 = imgs[0], imgs[1:]
    m = len(tsc)
    unknown = False
    for r in range(len(blocks) + 1):
        for S in combinations(range(len(blocks)), r):
            Z = sorted(i for j in S for i in blocks[j])
            rest = [i for i in range(m) if i not in Z]
            if Z:
                sol = span_contains([tuple(d[i] for i in Z) for d in D0], tuple(v0[i] for i in Z))
                if sol is None:
                    continue
                den, cs = sol[0], sol[1:]
                kern = _nullspace([_slots(tuple(d[i] for i in Z)) for d in D0])
            else:
                den, cs = ONE_SERIES, [ZERO_SERIES] * len(D0)
                kern = [[ONE_SERIES if a == b else ZERO_SERIES for a in range(len(D0))]
                        for b in range(len(D0))]
            vp = tuple(v0[i] * den - sum((d[i] * c for d, c in zip(D0, cs)), KvElement()) for i in rest)
            Dp = _independent([tuple(sum((d[i] * c for d, c in zip(D0, k)), KvElement()) for i in rest)
                               for k in kern])
            sc = tuple(tsc[i] for i in rest)
            dn = den.norm()
            stuck = False
            for j in range(len(blocks)):
                if j in S:
                    continue
                for i in blocks[j]:
                    q = rest.index(i)
                    if all(d[q].is_zero() for d in Dp) and kv_norm(vp[q]) * sc[q] >= val * dn:
                        stuck = True
            if stuck:
                continue
            res = _dist(vp, Dp, sc)
            if res is None:
                unknown = True
                continue
            dv = res[0] / dn
            if dv < val:
                return True
            if dv == val and res[1] is not False:
                if len(S) == len(blocks) and res[1] is True:
                    return True
                unknown = True
    return None if unknown else False


def distance(v: Sequence, D: Sequence[Sequence], P) -> Distance:
    """``d(v, span D)`` in the ambient of ``P`` with its attainment flag."""
    scales = P.scales if isinstance(P, SpacePresentation) else tuple(_nv(s) for s in P)
    v = tuple(_kv(x) for x in v)
    D = [tuple(_kv(x) for x in d) for d in D]
    D = _independent(D)
    if D and span_contains(D, v) is not None:
        return Distance(ZERO, True)
    res = _dist(v, D, scales)
    if res is not None:
        return Distance(res[0], res[1])
    from . import oracle

    lo, hi = oracle.dist_bounds(v, D, scales, depth=16)
    return Distance(hi, None, lo == hi, lo, hi, via_oracle=True)


def _independent(D: list) -> list:
    keep: list = []
    for d in D:
        if all(x.is_zero() for x in d):
            continue
        if not keep or not _nullspace([_slots(u) for u in keep + [d]]):
            keep.append(d)
    return keep


def is_attained(v: Sequence, D: Sequence[Sequence], P):
    """Attainment of ``d(v, span D)``: ``True``, ``False`` or ``None``."""
    return distance(v, D, P).attained


def _approx(v, D, scales, tol: NormValue):
    """``(den, coeffs)`` with ``||den v - sum coeffs D|| < |den| tol``."""
    if not D:
        if vec_norm(v, scales) < tol:
            return ONE_SERIES, []
        raise Unresolved("approximation target below the distance")
    an = _analyse(D, scales)
    if an is None:
        raise Unresolved("no vector with entries in K to reduce against")
    red = an.red
    comp = [D[l] for l in an.comp]
    imgs, tsc = red.tmap([v] + comp)
    den2, c2 = _approx(imgs[0], imgs[1:], tsc, tol)
    w = list(x * den2 for x in v)
    for l, c in zip(an.comp, c2):
        for i in range(len(w)):
            w[i] = w[i] - D[l][i] * c
    t2 = tol * den2.norm()
    _, _, nus = red.parts(w)
    nuhat = [nu.kpart if nu.in_K() else approx_in_K(nu, t2 * red.D[j].norm() / red.norms[j])
             for j, nu in enumerate(nus)]
    n = len(D)
    coeffs = [ZERO_SERIES] * n
    for l, c in zip(an.comp, c2):
        coeffs[l] = coeffs[l] + c * red.Dk
    for j in range(red.k):
        f = red._ratio(red.k - 1, j) * nuhat[j]
        for l in range(n):
            coeffs[l] = coeffs[l] + f * red.coeffs[j][l]
    return den2 * red.Dk, coeffs


def approximate(v: Sequence, D: Sequence[Sequence], P, tol: NormValue) -> list[TruncSeries]:
    """Exact coefficients ``c`` with ``||v - sum c_l D_l|| < tol``.

    ``D`` must be independent and ``tol`` must exceed ``d(v, span D)``.
    """
    scales = P.scales if isinstance(P, SpacePresentation) else tuple(_nv(s) for s in P)
    v = tuple(_kv(x) for x in v)
    D = [tuple(_kv(x) for x in d) for d in D]
    den, coeffs = _approx(v, D, scales, tol)
    out = []
    for c, d in zip(coeffs, D):
        nd = vec_norm(d, scales)
        out.append(_kdiv(c, den, tol / nd) if not nd.is_zero else ZERO_SERIES)
    return out


# ---------------------------------------------------------------------------
# isometry witnesses


def random_scalar(rng: random.Random) -> TruncSeries:
    """A small random exact series, zero with probability about 1/8."""
    if rng.random() < 0.125:
        return ZERO_SERIES
    acc = ZERO_SERIES
    for _ in range(rng.randint(1, 2)):
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        e = Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3]))
        acc = acc + monomial(c, e)
    return acc


@dataclass(frozen=True)
class Isometry:
    """The linear map sending ``sources[i]`` to ``targets[i]``.

    ``sources`` is a basis of the domain space (vectors in its ambient) and
    ``targets`` their images in the codomain ambient.
    """

    source_scales: tuple
    sources: tuple
    target_scales: tuple
    targets: tuple

    def apply(self, coeffs: Sequence[TruncSeries]) -> tuple[Vector, Vector]:
        m1, m2 = len(self.source_scales), len(self.target_scales)
        return (_combine(self.sources, coeffs, m1), _combine(self.targets, coeffs, m2))

    def check(self, samples: int = 100, seed: int = 0) -> bool:
        """Compare norms of ``samples`` random combinations."""
        rng = random.Random(seed)
        for _ in range(samples):
            coeffs = [random_scalar(rng) for _ in self.sources]
            a, b = self.apply(coeffs)
            if vec_norm(a, self.source_scales) != vec_norm(b, self.target_scales):
                return False
        return True


# ---------------------------------------------------------------------------
# canonical forms


@dataclass(frozen=True)
class CanonicalForm:
    """``space`` is ``[e_1..e_rank, f_1..]`` with atom-only ``f`` entries."""

    space: SpacePresentation
    rank: int
    witness: Isometry


def _unit(i: int, m: int) -> Vector:
    return tuple(KvElement(1) if j == i else KvElement() for j in range(m))


def _orthogonal_form(P: SpacePresentation, vecs: list, norms: list) -> CanonicalForm:
    n = len(vecs)
    space = SpacePresentation(tuple(norms), tuple(_unit(i, n) for i in range(n)))
    wit = Isometry(P.scales, tuple(vecs), space.scales, space.basis)
    return CanonicalForm(space, n, wit)


def _covering_form(P, keep: list[int], kvecs: list, comp: list) -> CanonicalForm:
    """Projection to ``keep`` is isometric and its image contains ``K^keep``."""
    m = len(keep)
    scales = tuple(P.scales[i] for i in keep)
    basis = [_unit(i, m) for i in range(m)]
    for f in comp:
        basis.append(tuple(KvElement.from_atoms(ZERO_SERIES, f[i].atoms()) for i in keep))
    space = SpacePresentation(scales, tuple(basis))
    sources = list(kvecs) + list(comp)
    targets = [tuple(s[i] for i in keep) for s in sources]
    return CanonicalForm(space, m, Isometry(P.scales, tuple(sources), scales, tuple(targets)))


def _kratio(x: KvElement, y: KvElement) -> tuple[TruncSeries, TruncSeries] | None:
    """``(p, q)`` with ``q x = p y`` when ``x`` is a K-multiple of ``y != 0``."""
    sy = _slots((y,))
    if not sy:
        return None
    sx = _slots((x,))
    if not sx:
        return ZERO_SERIES, ONE_SERIES
    if set(sx) != set(sy):
        return None
    k = next(iter(sorted(sy, key=repr)))
    p, q = sx[k], sy[k]
    if x * q == y * p:
        return p, q
    return None


def _dominated(cols: list[list[KvElement]], scales, rows: list[int], phi_rows: list[int]) -> bool:
    """Whether each ``rows`` coordinate is bounded by some ``phi_rows`` one.

    ``cols[l][i]`` is coordinate ``i`` of the l-th image.  A coordinate is
    dominated when it vanishes or equals ``c`` times a residue coordinate
    with ``|c| * scale_i <= scale_kappa``.
    """
    for i in rows:
        col = [c[i] for c in cols]
        if all(x.is_zero() for x in col):
            continue
        ok = False
        for kappa in phi_rows:
            ref = [c[kappa] for c in cols]
            l = next((l for l, y in enumerate(ref) if not y.is_zero()), None)
            if l is None:
                continue
            r = _kratio(col[l], ref[l])
            if r is None:
                continue
            p, q = r
            if all((col[j] * q) == (ref[j] * p) for j in range(len(cols))):
                if p.is_zero() or p.norm() / q.norm() * scales[i] <= scales[kappa]:
                    ok = True
                    break
        if not ok:
            return False
    return True


def canonicalize(P: SpacePresentation) -> CanonicalForm:
    """An isometric normal-form presentation with a witness.

    Raises :class:`Unresolved` when no maximal orthogonal subset can be
    certified by the calculus.
    """
    n, m = P.n, P.m
    if n == 0:
        return CanonicalForm(SpacePresentation((), ()), 0, Isometry(P.scales, (), (), ()))
    basis = [tuple(b) for b in P.basis]
    cols = [i for i in range(m) if any(not b[i].is_zero() for b in basis)]
    if n == 1 or is_orthogonal(basis, P.scales):
        return _orthogonal_form(P, basis, [vec_norm(b, P.scales) for b in basis])
    ks = _ksubspace(basis, m)
    if not ks:
        raise Unresolved("the span contains no vector with entries in K")
    red = _Reduction(P.scales, ks)
    kvecs = [tuple(KvElement(x) for x in u) for u in red.u]
    comp_idx = _complement([c for _, c in ks], n)
    comp = [basis[l] for l in comp_idx]
    if not comp:
        return _orthogonal_form(P, kvecs, red.norms)
    piv = sorted(red.piv)
    nonpiv = [i for i in cols if i not in red.piv]
    if not nonpiv:
        return _covering_form(P, piv, kvecs, comp)
    imgs, tsc = red.tmap(comp)
    nrows = len(red.nonpivot)
    rows = [red.nonpivot.index(i) for i in nonpiv]
    if _dominated([list(c) for c in imgs], tsc, rows, list(range(nrows, len(tsc)))):
        return _covering_form(P, piv, kvecs, comp)
    if len(comp) == 1:
        w = comp[0]
        rho, phis, nus = red.parts(w)
        phi = max(phis, default=ZERO)
        if not (phi < rho or phi.is_zero):
            return _covering_form(P, piv, kvecs, comp)
        lifted = list(w)
        dk = red.D
        for j in range(red.k):
            c = _kdiv(approx_in_K(nus[j], rho * dk[j].norm() / red.norms[j]) if not nus[j].in_K()
                      else nus[j].kpart, dk[j], rho / red.norms[j])
            lifted = [x - KvElement(uu) * c for x, uu in zip(lifted, red.u[j])]
        return _orthogonal_form(P, kvecs + [tuple(lifted)], list(red.norms) + [rho])
    raise Unresolved("several complement vectors with undecided liftability")


def spherical_rank(P: SpacePresentation) -> int:
    """Cardinality of a maximal orthogonal subset."""
    try:
        return canonicalize(P).rank
    except Unresolved:
        pass
    basis = [tuple(b) for b in P.basis]
    lower = 0
    chosen: list = []
    for b in basis:
        if is_orthogonal(chosen + [b], P.scales):
            chosen.append(b)
    lower = len(chosen)
    upper = min(P.n, sum(1 for i in range(P.m) if any(not b[i].is_zero() for b in basis)))
    if lower == upper:
        return lower
    raise Unresolved(f"rank between {lower} and {upper}")


# ---------------------------------------------------------------------------
# quotients


def _kquotient(P: SpacePresentation, u: Vector) -> SpacePresentation:
    red = _Reduction(P.scales, [([x.kpart for x in u], [ONE_SERIES])])
    rel = span_contains(P.basis, u)
    drop = next(l for l in range(P.n) if not rel[l + 1].is_zero())
    keep = [tuple(b) for l, b in enumerate(P.basis) if l != drop]
    imgs, tsc = red.tmap(keep)
    live = [i for i in range(len(tsc)) if any(not c[i].is_zero() for c in imgs)]
    return SpacePresentation(tuple(tsc[i] for i in live), tuple(tuple(c[i] for i in live) for c in imgs))


def quotient(P: SpacePresentation, u: Sequence) -> SpacePresentation:
    """A presentation isometric to ``P / [u]``.

    Exact for ``u`` with entries in ``K``; for other ``u`` in a space of
    spherical rank 1 all line quotients are isometric, so a K-vector of the
    space is used instead.
    """
    u = tuple(_kv(x) for x in u)
    if all(x.is_zero() for x in u):
        raise ValueError("cannot divide by the zero vector")
    if span_contains(P.basis, u) is None:
        raise NotInSpace("u is not in the space")
    if all(x.in_K() for x in u):
        return _kquotient(P, u)
    if spherical_rank(P) == 1:
        ks = _ksubspace([tuple(b) for b in P.basis], P.m)
        if ks:
            return _kquotient(P, tuple(KvElement(x) for x in ks[0][0]))
    raise Unresolved("quotient by a vector outside K^m in a space of rank above 1")


# ---------------------------------------------------------------------------
# duals


def _residue_vector(f: Vector, scales) -> tuple[list, list]:
    """Coordinates ``(i, family)`` of ``Z(f_i)`` and their scales."""
    keys, vals, sc = [], [], []
    for i, x in enumerate(f):
        for a, z in sorted(residues(x).items(), key=lambda kv: repr(kv[0])):
            keys.append((i, a))
            vals.append(z)
            sc.append(scales[i] * family_level(a))
    return keys, list(zip(keys, vals, sc))


def _residue_space(fs: list, scales):
    """Common coordinates for the residue vectors of ``fs``."""
    per = [dict(((i, a), (z, s)) for (i, a), z, s in _residue_vector(f, scales)[1]) for f in fs]
    keys = sorted(set().union(*[set(p) for p in per]), key=repr)
    sc = []
    for k in keys:
        for p in per:
            if k in p:
                sc.append(p[k][1])
                break
    vecs = [tuple(p[k][0] if k in p else KvElement() for k in keys) for p in per]
    return vecs, tuple(sc)


def _orthogonal_residues(C: SpacePresentation, m: int):
    """A basis change of the ``f`` block making the residues orthogonal."""
    fs = [tuple(b) for b in C.basis[m:]]
    vecs, sc = _residue_space(fs, C.scales)
    if is_orthogonal(vecs, sc):
        return fs, [vec_norm(v, sc) for v in vecs]
    if all(all(x.in_K() for x in v) for v in vecs):
        red = _Reduction(sc, [([x.kpart for x in v], [ONE_SERIES if j == l else ZERO_SERIES
                                                       for j in range(len(fs))])
                              for l, v in enumerate(vecs)])
        if red.k == len(fs):
            new = [_combine(fs, c, C.m) for c in red.coeffs]
            new = [tuple(KvElement.from_atoms(ZERO_SERIES, x.atoms()) for x in f) for f in new]
            return new, list(red.norms)
    return None


def _dual_general(C: SpacePresentation, m: int):
    got = _orthogonal_residues(C, m)
    if got is None:
        return None
    fs, rhos = got
    k = len(fs)
    primal = SpacePresentation(C.scales, tuple(C.basis[:m]) + tuple(fs))
    rows = [tuple(fs[j][i] for j in range(k)) for i in range(m)]
    inv_rho = [r.inverse() for r in rhos]
    row_vecs, row_sc = _residue_space(rows, tuple(inv_rho))
    drop = is_orthogonal([r for r in row_vecs if any(not x.is_zero() for x in r)], row_sc) and all(
        vec_norm(r, row_sc) == C.scales[i].inverse() for i, r in enumerate(row_vecs))
    if drop:
        scales = tuple(inv_rho)
        eps = [tuple(-x for x in rows[i]) for i in range(m)]
        phis = [_unit(j, k) for j in range(k)]
    else:
        scales = tuple(inv_rho) + tuple(s.inverse() for s in C.scales)
        eps = [tuple(-x for x in rows[i]) + _unit(i, m) for i in range(m)]
        phis = [_unit(j, k) + tuple(KvElement() for _ in range(m)) for j in range(k)]
    return SpacePresentation(scales, tuple(eps + phis), dual_of=primal)


def dual(P: SpacePresentation) -> SpacePresentation:
    """A presentation of ``P'`` whose basis is dual to ``result.dual_of.basis``.

    Covered: spaces with an orthogonal base, canonical forms whose hole block
    has (after a basis change) orthogonal residues, and direct sums of
    covered spaces.  Anything else raises :class:`UnsupportedFamily`.
    """
    C = canonicalize(P).space
    m = sum(1 for b in C.basis if all(x.in_K() for x in b))
    if m == C.n:
        return SpacePresentation(tuple(s.inverse() for s in C.scales), C.basis, dual_of=C)
    got = _dual_general(C, m)
    if got is not None:
        return got
    dec = decompose(C)
    if dec is not None:
        d1, d2 = dual(dec.first), dual(dec.second)
        out = direct_sum(d1, d2)
        return SpacePresentation(out.scales, out.basis, dual_of=direct_sum(d1.dual_of, d2.dual_of))
    raise UnsupportedFamily("no explicit dual presentation for this family")


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class Decomposition:
    """``canonical`` is isometric to ``first (+) second`` via ``witness``.

    ``to_canonical`` maps the input presentation onto ``canonical``.
    """

    first: SpacePresentation
    second: SpacePresentation
    witness: Isometry
    canonical: SpacePresentation
    to_canonical: Isometry

    def __iter__(self):
        return iter((self.first, self.second, self.witness))


def _split_coordinate(C: SpacePresentation, m: int, i: int, cvals: list) -> tuple:
    """Split ``e_i`` off ``C`` given ``cvals[j]`` close to ``f_j[i]``.

    The complement is ``[e_l (l != i), f_j - cvals[j] e_i]``, whose i-th
    coordinates are small enough to be dropped.
    """
    others = [l for l in range(m) if l != i]
    first = SpacePresentation((C.scales[i],), ((KvElement(1),),))
    sec_basis = [_unit(r, m - 1) for r in range(m - 1)]
    fs = [tuple(b) for b in C.basis[m:]]
    for f in fs:
        sec_basis.append(tuple(f[l] for l in others))
    second = SpacePresentation(tuple(C.scales[l] for l in others), tuple(sec_basis))
    targets = []
    for l in range(m):
        if l == i:
            targets.append((KvElement(1),) + tuple(KvElement() for _ in others))
        else:
            targets.append((KvElement(),) + _unit(others.index(l), m - 1))
    for f, c in zip(fs, cvals):
        targets.append((KvElement(c),) + tuple(f[l] for l in others))
    wit = Isometry(C.scales, tuple(tuple(b) for b in C.basis), first.scales + second.scales, tuple(targets))
    return first, second, wit


def _decompose_hyperplane(C: SpacePresentation, m: int):
    """Rank ``dim - 1``: ``[e_1..e_m, f]`` split by levels and residues."""
    f = tuple(C.basis[m])
    lv = []
    for i in range(m):
        d, _ = dist_to_K(f[i])
        lv.append(d * C.scales[i])
    tau = max(lv)
    for i in range(m):
        if lv[i] < tau:
            c = approx_in_K(f[i], tau / C.scales[i])
            return (*_split_coordinate(C, m, i, [c]), None)
    zs = []
    for i in range(m):
        res = residues(f[i])
        vec = tuple(res.get(a, KvElement()) for a in sorted(res, key=repr))
        zs.append((res, vec))
    keys = sorted(set().union(*[set(r) for r, _ in zs]), key=repr)
    vecs = [tuple(r.get(a, KvElement()) for a in keys) for r, _ in zs]
    sc = tuple(family_level(a) for a in keys)
    if is_orthogonal(vecs, sc):
        return None
    leads = [_lead(v, sc) for v in vecs]
    # find a rational relation among leading vectors of the level-matched residues
    rel = _rational_relation([ld for _, ld in leads])
    if rel is None:
        raise Unresolved("residues are not orthogonal but no leading relation was found")
    i0 = next(i for i, q in enumerate(rel) if q != 0)
    vals = [leading_term(_max_entry(v, sc))[0] for v in vecs]
    lam = {}
    for j, q in enumerate(rel):
        if j != i0 and q != 0:
            lam[j] = monomial(Fraction(q) / rel[i0], vals[i0] - vals[j])
    # ambient map y_{i0} -> y_{i0} + sum lam_j y_j is isometric here
    newf = list(f)
    for j, c in lam.items():
        newf[i0] = newf[i0] + f[j] * c
    newC = SpacePresentation(C.scales, tuple(tuple(b) for b in C.basis[:m]) + (tuple(newf),))
    c0 = approx_in_K(newf[i0], tau / C.scales[i0])
    first, second, wit2 = _split_coordinate(newC, m, i0, [c0])
    # express the original basis through the transformed one
    targets = []
    for l in range(m):
        img = list(wit2.targets[l])
        if l in lam:
            img = [a + b * lam[l] for a, b in zip(img, wit2.targets[i0])]
        targets.append(tuple(img))
    targets.append(tuple(wit2.targets[m]))
    wit = Isometry(C.scales, tuple(tuple(b) for b in C.basis), wit2.target_scales, tuple(targets))
    return first, second, wit, None


def _max_entry(v, sc):
    best, out = ZERO, None
    for x, s in zip(v, sc):
        if not x.is_zero():
            val = kv_norm(x) * s
            if best < val:
                best, out = val, x
    return out


def _rational_relation(leads: list[dict]) -> list[Fraction] | None:
    """A nonzero rational relation among the leading vectors, if any."""
    n = len(leads)
    keys = sorted(set().union(*leads), key=repr)
    # columns: leads; solve sum q_j lead_j = 0
    rows = [[Fraction(ld.get(k, 0)) for ld in leads] for k in keys]
    piv = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    free = [c for c in range(n) if c not in piv]
    if not free:
        return None
    fcol = free[0]
    q = [Fraction(0)] * n
    q[fcol] = Fraction(1)
    for k, pc in enumerate(piv):
        q[pc] = -rows[k][fcol]
    return q


def decompose(P: SpacePresentation):
    """``None`` when indecomposable, else a :class:`Decomposition`.

    Covers every space of dimension at most 4 reachable by the calculus.
    """
    cf = canonicalize(P)
    C = cf.space
    n = C.n
    if n <= 1:
        return None
    m = cf.rank
    if m == n:
        first = SpacePresentation((C.scales[0],), ((KvElement(1),),))
        second = SpacePresentation(C.scales[1:], tuple(_unit(i, n - 1) for i in range(n - 1)))
        wit = Isometry(C.scales, C.basis, C.scales, C.basis)
        return Decomposition(first, second, wit, C, cf.witness)
    fs = [tuple(b) for b in C.basis[m:]]
    for i in range(m):
        if all(f[i].is_zero() for f in fs):
            first, second, wit = _split_coordinate(C, m, i, [ZERO_SERIES] * len(fs))
            return Decomposition(first, second, wit, C, cf.witness)
    if m == 1:
        return None
    if len(fs) == 1:
        got = _decompose_hyperplane(C, m)
        if got is None:
            return None
        first, second, wit, _ = got
        return Decomposition(first, second, wit, C, cf.witness)
    if m == 2 and len(fs) == 2:
        from . import _fourdim

        got = _fourdim.decompose_rank2(C)
        if got is None:
            return None
        first, second, wit = got
        return Decomposition(first, second, wit, C, cf.witness)
    raise Unresolved("decomposition is implemented up to dimension 4")
