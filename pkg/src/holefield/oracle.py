"""Bounded-depth brute-force checks that do not go through the distance engine.

The oracle sees elements through their truncated expansions, exact norms of
explicit differences, and linear functionals built from coordinates and
residues.  Upper bounds come from explicit approximants, lower bounds from
functionals vanishing on the subspace, so ``lower <= d <= upper`` holds by
construction and equality of the two is a certificate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Sequence

from .holes import NotAHole, hole_class, residue_lead
from .kvmodel import KvElement, dist_to_K, expand, family_level, kv_norm, leading_term, residues
from .series import ONE_SERIES, ZERO_SERIES, TruncSeries, monomial, s_invert
from .spaces import (
    SpacePresentation,
    _kv,
    _nullspace,
    _nv,
    decompose,
    distance,
    dual,
    make_space,
    random_scalar,
    span_contains,
    vec_norm,
)
from .valgroup import ONE, ZERO, NormValue

__all__ = [
    "best_approx",
    "dist_bounds",
    "CertifiedNo",
    "ConsistentUpTo",
    "equiv_bounded",
    "MobiusReport",
    "mobius_check",
    "BallReport",
    "ball_avoidance_check",
    "DualNormReport",
    "dual_norm_check",
    "XVReport",
    "xv_corollary_check",
    "xv_conjecture_probe",
    "form_a_data",
]

DEFAULT_DEPTH = 12


def _scales(P) -> tuple:
    return P.scales if isinstance(P, SpacePresentation) else tuple(_nv(s) for s in P)


# ---------------------------------------------------------------------------
# approximation


def best_approx(x: KvElement, depth: int) -> tuple[TruncSeries, NormValue]:
    """Partial sum of the first ``depth`` schedule terms and ``|x - partial sum|``."""
    x = _kv(x)
    approx = expand(x, depth).exact_part()
    return approx, kv_norm(x - KvElement(approx))


# ---------------------------------------------------------------------------
# distance bounds


def _fam_key(a):
    return (a, 0) if isinstance(a, int) else a


def _paths(x: KvElement, levels: int) -> list[tuple]:
    """Residue paths ``(a,)``, ``(a, b)``, ... reachable from ``x``."""
    out = []
    frontier = [((), x)]
    for _ in range(levels):
        nxt = []
        for path, y in frontier:
            for a, z in residues(y).items():
                p = path + (a,)
                out.append(p)
                nxt.append((p, z))
        frontier = nxt
    return out


def _value(x: KvElement, path: tuple) -> KvElement:
    for a in path:
        x = residues(x).get(a)
        if x is None:
            return KvElement()
    return x


def _row_weight(s: NormValue, path: tuple) -> NormValue:
    w = s
    for a in path:
        w = w * family_level(a)
    return w


def _slots1(x: KvElement, tag) -> dict:
    out = {}
    if not x.kpart.is_zero():
        out[(tag, ())] = x.kpart
    for a, c in x.atoms().items():
        out[(tag, a)] = c
    return out


def _lower(v, D, scales, levels: int = 2) -> NormValue:
    """Best ``|Phi(v)| / ||Phi||`` over functionals ``Phi`` killing ``D``.

    ``Phi`` is a ``K``-combination of coordinates and iterated residues;
    the row for coordinate ``i`` and path ``p`` is bounded by
    ``||w|| / (s_i * prod level(a))``.
    """
    keys = set()
    for w in [v] + list(D):
        for i, x in enumerate(w):
            keys.add((i, ()))
            for p in _paths(x, levels):
                keys.add((i, p))
    rows = sorted(keys, key=repr)
    cols = []
    for i, p in rows:
        col = {}
        for l, d in enumerate(D):
            col.update(_slots1(_value(d[i], p), l))
        cols.append(col)
    ker = _nullspace(cols) if D else [[ONE_SERIES if r == q else ZERO_SERIES for r in range(len(rows))]
                                      for q in range(len(rows))]
    weights = [_row_weight(scales[i], p) for i, p in rows]
    vals = [_value(v[i], p) for i, p in rows]

    def ratio(alpha):
        phi = KvElement()
        den = ZERO
        for a, val, wt in zip(alpha, vals, weights):
            if a.is_zero():
                continue
            phi = phi + val * a
            den = max(den, a.norm() / wt)
        if den.is_zero or phi.is_zero():
            return ZERO
        return kv_norm(phi) / den

    best = ZERO
    for alpha in ker:
        best = max(best, ratio(alpha))
    if 1 < len(ker) <= 3:
        for signs in product((-1, 0, 1), repeat=len(ker)):
            if sum(1 for s in signs if s) < 2:
                continue
            alpha = [ZERO_SERIES] * len(rows)
            for s, k in zip(signs, ker):
                if s:
                    alpha = [a + b.scale(s) for a, b in zip(alpha, k)]
            best = max(best, ratio(alpha))
    best = max(best, _refine(ker, weights, ratio, 2 * len(rows)))
    return max(best, _lower_pivot(v, D, scales))


def _det(M: list) -> TruncSeries:
    n = len(M)
    out = ZERO_SERIES
    for perm in permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = ONE_SERIES
        for r, c in enumerate(perm):
            term = term * M[r][c]
        out = out + term.scale(sign)
    return out


def _sum_norm(pairs) -> NormValue | None:
    """``|sum a*b|`` where products of two holes are known only by norm.

    Returns ``None`` when an uncomputed product ties for the top norm.
    """
    exact, others = KvElement(), []
    for a, b in pairs:
        if a.is_zero() or b.is_zero():
            continue
        if a.in_K():
            exact = exact + b * a.kpart
        elif b.in_K():
            exact = exact + a * b.kpart
        else:
            others.append(kv_norm(a) * kv_norm(b))
    cands = others + ([kv_norm(exact)] if not exact.is_zero() else [])
    if not cands:
        return ZERO
    top = max(cands)
    if others and cands.count(top) > 1:
        return None
    return top


def _lower_pivot(v, D, scales) -> NormValue:
    """Adjugate functionals ``det(M) x_j + sum_q gamma_q x_q`` over pivot sets ``Q``.

    ``Phi`` vanishes on ``D`` by commutativity.  A single row uses
    ``d_q x_j - d_j x_q`` for any pair; more rows need the entries of ``D``
    on ``Q`` in ``K`` so ``det(M)`` is computable.
    """
    n, m = len(D), len(scales)
    neg = monomial(-1, 0)
    best = ZERO

    def offer(pairs, den):
        nonlocal best
        num = _sum_norm(pairs)
        if num is not None and not den.is_zero:
            best = max(best, num / den)

    if n == 1:
        d = D[0]
        for q in range(m):
            if d[q].is_zero():
                continue
            for j in range(m):
                if j != q:
                    den = kv_norm(d[q]) / scales[j]
                    if not d[j].is_zero():
                        den = max(den, kv_norm(d[j]) / scales[q])
                    offer([(d[q], v[j]), (d[j] * neg, v[q])], den)
        return best
    kc = [i for i in range(m) if all(d[i].in_K() for d in D)]
    for Q in combinations(kc, n):
        M = [[d[q].kpart for q in Q] for d in D]
        det = _det(M)
        if det.is_zero():
            continue
        for j in range(m):
            if j in Q:
                continue
            pairs = [(KvElement(det), v[j])]
            den = det.norm() / scales[j]
            for qi, q in enumerate(Q):
                g = KvElement()
                for l in range(n):
                    minor = [[M[r][c] for c in range(n) if c != qi] for r in range(n) if r != l]
                    g = g - D[l][j] * _det(minor).scale((-1) ** (l + qi))
                if not g.is_zero():
                    pairs.append((g, v[q]))
                    den = max(den, kv_norm(g) / scales[q])
            offer(pairs, den)
    return best


def _refine(ker, weights, ratio, steps: int, beam: int = 4) -> NormValue:
    """Greedy search in ``span ker`` lowering ``||Phi||`` at its top row.

    Each move cancels the leading term of the row attaining ``||Phi||``
    with a monomial multiple of another kernel vector.
    """
    if len(ker) < 2:
        return ZERO

    def top_rows(alpha):
        vals = [(a.norm() / w, r) for r, (a, w) in enumerate(zip(alpha, weights)) if not a.is_zero()]
        if not vals:
            return []
        top = max(v for v, _ in vals)
        return [r for v, r in vals if v == top]

    states = [(ratio(k), tuple(k)) for k in ker]
    best = max(r for r, _ in states)
    seen = {a for _, a in states}
    for _ in range(steps):
        cand = []
        for _, alpha in states:
            for r in top_rows(alpha):
                e, c = alpha[r].terms[0]
                for k in ker:
                    if k[r].is_zero():
                        continue
                    ek, ck = k[r].terms[0]
                    f = monomial(Fraction(c) / Fraction(ck), e - ek)
                    nxt = tuple(a - b * f for a, b in zip(alpha, k))
                    if nxt in seen or all(a.is_zero() for a in nxt):
                        continue
                    seen.add(nxt)
                    cand.append((ratio(nxt), nxt))
        if not cand:
            break
        cand.sort(key=lambda rc: rc[0], reverse=True)
        states = cand[:beam]
        best = max(best, states[0][0])
    return best


def _k_coords(D, m: int) -> list[int]:
    return [i for i in range(m)
            if span_contains(D, tuple(KvElement(1) if j == i else KvElement() for j in range(m))) is not None]


def _coord_value(x: KvElement, s: NormValue, i: int, I: set, H: dict, depth: int) -> NormValue:
    """Contribution of coordinate ``i`` after the free moves inside the span.

    ``i`` in ``I`` means ``K e_i`` lies in the span, so only ``d(x, K)``
    counts; hole multiples ``h e_i`` in the span (``H[i]``) then reduce the
    residue vector of ``x`` against those of the ``h``.
    """
    if x.is_zero():
        return ZERO
    if i not in I:
        return kv_norm(x) * s
    if not H.get(i) or x.in_K():
        return dist_to_K(x)[0] * s
    fams = sorted(set(residues(x)).union(*[residues(h) for h in H[i]]), key=_fam_key)
    rv = tuple(residues(x).get(a, KvElement()) for a in fams)
    rd = [tuple(residues(h).get(a, KvElement()) for a in fams) for h in H[i]]
    return _upper(rv, rd, tuple(family_level(a) for a in fams), depth) * s


def _profile(w, scales, I, H=None, depth: int = 0) -> list[NormValue]:
    out = [_coord_value(x, s, i, I, H or {}, depth) for i, (x, s) in enumerate(zip(w, scales))]
    return sorted((v for v in out if not v.is_zero), reverse=True)


def _lex_less(p: list, q: list) -> bool:
    for a, b in zip(p, q):
        if a != b:
            return a < b
    return len(p) < len(q)


def _moves(w, D, scales, I):
    """Candidate ``w - c d`` cancelling a leading term of a top coordinate."""
    prof = [(((dist_to_K(x)[0] if i in I else kv_norm(x)) * s), i)
            for i, (x, s) in enumerate(zip(w, scales)) if not x.is_zero()]
    if not prof:
        return
    top = max(p for p, _ in prof)
    for val, i in prof:
        if val != top or val.is_zero:
            continue
        x = w[i]
        for d in D:
            y = d[i]
            if y.is_zero():
                continue
            if i in I:
                if y.in_K():
                    continue
                _, lx = residue_lead(x)
                ly = residues(y)
                fam = next((a for a in sorted(lx, key=_fam_key) if a in ly), None)
                if fam is None:
                    continue
                ex, cx = leading_term(residues(x)[fam])
                ey, cy = leading_term(ly[fam])
            else:
                ex, cx = leading_term(x)
                ey, cy = leading_term(y)
            c = monomial(Fraction(cx) / Fraction(cy), ex - ey)
            yield tuple(a - b * c for a, b in zip(w, d))


def _upper(v, D, scales, depth: int, beam: int = 3) -> NormValue:
    I = set(_k_coords(D, len(scales))) if D else set()
    H: dict = {}
    for d in D:
        nz = [i for i, x in enumerate(d) if not x.is_zero()]
        if len(nz) == 1 and nz[0] in I and not d[nz[0]].in_K():
            H.setdefault(nz[0], []).append(d[nz[0]])

    def prof(w):
        return _profile(w, scales, I, H, depth)

    states = [tuple(v)]
    p0 = prof(states[0])
    best = p0[0] if p0 else ZERO
    seen = {states[0]}
    for _ in range(2 * depth):
        if best.is_zero:
            break
        cand = []
        for w in states:
            pw = prof(w)
            for u in _moves(w, D, scales, I):
                if u in seen:
                    continue
                pu = prof(u)
                if _lex_less(pu, pw):
                    seen.add(u)
                    cand.append((pu, u))
        if not cand:
            break
        cand.sort(key=lambda pu: [float(x) for x in pu[0]])
        cand = cand[:beam]
        states = [u for _, u in cand]
        for pu, _ in cand:
            best = min(best, pu[0] if pu else ZERO)
    return best


def dist_bounds(v: Sequence, D: Sequence[Sequence], P, depth: int = DEFAULT_DEPTH) -> tuple[NormValue, NormValue]:
    """``(lower, upper)`` around ``d(v, span D)``.

    The upper end is the best explicit approximant found by greedy
    leading-term cancellation (coordinates whose unit vector lies in the
    span only count their distance to ``K``); the lower end is the best
    functional bound from :func:`_lower`.
    """
    scales = _scales(P)
    v = tuple(_kv(x) for x in v)
    D = [tuple(_kv(x) for x in d) for d in D]
    D = [d for d in D if any(not x.is_zero() for x in d)]
    if not D:
        n = vec_norm(v, scales)
        return n, n
    if span_contains(D, v) is not None:
        return ZERO, ZERO
    hi = _upper(v, D, scales, depth)
    lo = min(_lower(v, D, scales), hi)
    return lo, hi


# ---------------------------------------------------------------------------
# equivalence at bounded depth


@dataclass(frozen=True)
class CertifiedNo:
    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class ConsistentUpTo:
    depth: int

    def __bool__(self) -> bool:
        return True


def equiv_bounded(x, y: KvElement, depth: int = DEFAULT_DEPTH):
    """Search for ``lam*x + mu`` inside the open ball ``B(y, d(y, K))``.

    A truncated series ``x`` is refuted only when it is exact, hence in
    ``K``; otherwise its unknown tail can always be chosen to land in the
    ball.  A model element is refuted when the leading residue parts of
    ``x`` and ``y`` are not proportional (no choice of ``lam`` cancels the
    top level of ``y``), and is reported consistent only after an explicit
    ``(lam, mu)`` built from expansions to ``depth`` lands in the ball.
    """
    y = _kv(y)
    rho = dist_to_K(y)[0]
    if rho.is_zero:
        raise NotAHole(f"{y} lies in K")
    if isinstance(x, TruncSeries):
        if x.prec is None:
            return CertifiedNo("exact series lies in K")
        return ConsistentUpTo(depth)
    x = _kv(x)
    if dist_to_K(x)[0].is_zero:
        return CertifiedNo("x lies in K")
    cx, cy = hole_class(x), hole_class(y)
    if cx.signature != cy.signature:
        return CertifiedNo(f"leading residues {cx.to_text()} and {cy.to_text()} are not proportional")
    a = cy.signature[0][0]
    ex, kx = leading_term(residues(x)[a])
    ey, ky = leading_term(residues(y)[a])
    lam = monomial(Fraction(ky) / Fraction(kx), ey - ex)
    diff = y - x * lam
    for k in range(1, depth + 1):
        mu, got = best_approx(diff, k)
        if got < rho:
            return ConsistentUpTo(depth)
    return ConsistentUpTo(depth) if dist_to_K(diff)[0] < rho else CertifiedNo("no scale matches")


# ---------------------------------------------------------------------------
# Moebius maps


@dataclass(frozen=True)
class MobiusReport:
    """Relation ``lam*y + mu ~ nu*x`` found for ``y = (c + d x)/(a + b x)``.

    ``residual`` is ``lam*y + mu - nu*x`` on the expansions and ``verdict``
    is :class:`ConsistentUpTo` when none of its known terms reaches
    ``|nu| d(x, K)``.  ``achieved`` is the exact value of
    ``|(lam*y + mu)/nu - x|`` and ``radius`` is ``d(x, K)``.
    """

    verdict: object
    lam: TruncSeries
    mu: TruncSeries
    nu: TruncSeries
    residual: TruncSeries
    achieved: NormValue
    radius: NormValue

    @property
    def within_ball(self) -> bool:
        return self.achieved < self.radius


def _series(c) -> TruncSeries:
    return c if isinstance(c, TruncSeries) else monomial(Fraction(c), 0)


def _unit_tol(u: KvElement) -> NormValue:
    """A tolerance ``tol > d(u, K)`` with ``tol^2 < d(u, K) |u|``."""
    r = dist_to_K(u)[0]
    gap = kv_norm(u) / r
    eps = Fraction(1, 2)
    while not NormValue.pos(-2 * eps) * r * r < r * r * gap:
        eps /= 2
    return r * NormValue.pos(-eps)


def mobius_check(x: KvElement, a, b, c, d, depth: int = DEFAULT_DEPTH) -> MobiusReport:
    """Expand ``y = (c + d x)/(a + b x)`` and test it against ``x``.

    With ``u = a + b x``, ``D = cb - ad`` and ``k`` in ``K`` close to ``u``,
    ``b k^2 y`` agrees with ``d k^2 + 2 D k - a D - D b x`` up to
    ``|D| |u - k|^2 / |u|``, which lies below ``|D b| d(x, K)``.
    """
    x = _kv(x)
    a, b, c, d = (_series(z) for z in (a, b, c, d))
    delta = c * b - a * d
    if delta.is_zero():
        raise ZeroDivisionError("singular matrix")
    rho = dist_to_K(x)[0]
    xs = expand(x, depth)
    u = xs * b + a
    if not u.terms:
        raise ValueError("expansion too short to invert a + b x")
    v0 = u.terms[0][0]
    target = u.prec - 2 * v0 if u.prec is not None else xs.prec
    y = (xs * d + c) * s_invert(u, target)
    if b.is_zero():
        lam, mu, nu = a, -c, d
        achieved = ZERO
    else:
        k = KvElement(a) + x * b
        kap = _approx_tol(k, _unit_tol(k))
        lam = -(b * kap * kap)
        mu = d * kap * kap + delta * kap * 2 - a * delta
        nu = delta * b
        # (lam*y + mu)/nu - x = -(u - kap)^2 / (b u) exactly
        achieved = kv_norm(k - KvElement(kap)) * kv_norm(k - KvElement(kap)) / (b.norm() * kv_norm(k))
    res = y * lam + mu - xs * nu
    radius = nu.norm() * rho
    known = res.exact_part()
    bad = [e for e, co in known.terms if co and not NormValue.from_valuation(e) < radius]
    verdict = ConsistentUpTo(depth) if not bad else CertifiedNo(f"residual term t^{bad[0]} reaches the radius")
    if isinstance(verdict, ConsistentUpTo) and not equiv_bounded(y, x, depth):
        verdict = CertifiedNo("expansion of y is exact")
    return MobiusReport(verdict, lam, mu, nu, res, achieved, rho)


def _approx_tol(x: KvElement, tol: NormValue) -> TruncSeries:
    k = 1
    while True:
        approx, got = best_approx(x, k)
        if got < tol:
            return approx
        k *= 2


# ---------------------------------------------------------------------------
# ball avoidance


@dataclass
class BallReport:
    """Counts of checked instances and the failures of conditions (2) and (3)."""

    depth: int
    cond2_checked: int = 0
    cond3_checked: int = 0
    cond2_failures: list = field(default_factory=list)
    cond3_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.cond2_failures and not self.cond3_failures


def _random_k(rng: random.Random) -> TruncSeries:
    return random_scalar(rng)


def ball_avoidance_check(xs: Sequence[KvElement], depth: int = 10, samples: int = 20,
                         seed: int = 0) -> BallReport:
    """Check conditions (2) and (3) for the partial-sum approximants of ``xs``.

    Scales ``t_i`` are chosen so that ``t_i d(x_i, K)`` agree.  Condition
    (2) at ``(a, L)`` holds once some ``k <= depth`` has the oracle's lower
    bound for ``d(c_k - a, L)`` above ``s_k``.  Condition (3) at
    ``(i, lam, lam_j)`` holds once some ``k0 < depth`` has every value for
    ``k0 < k <= depth`` above ``r_{i,k0}``.
    """
    xs = [_kv(x) for x in xs]
    n = len(xs)
    rs = [dist_to_K(x)[0] for x in xs]
    ts = [rs[0] / r for r in rs]
    cs = [[None] + [best_approx(x, k)[0] for k in range(1, depth + 1)] for x in xs]
    rk = [[None] + [kv_norm(x - KvElement(c)) for c in cs[i][1:]] for i, x in enumerate(xs)]
    sk = [None] + [max(ts[i] * rk[i][k] for i in range(n)) for k in range(1, depth + 1)]
    rng = random.Random(seed)
    rep = BallReport(depth)

    def ck(k):
        return tuple(KvElement(cs[i][k]) for i in range(n))

    for trial in range(samples):
        if trial % 4 == 0:
            a = ck(rng.randint(1, depth // 2))
        else:
            a = tuple(KvElement(_random_k(rng)) for _ in range(n))
        dimL = 0 if trial == 0 else rng.randint(0, n - 1)
        L = [tuple(KvElement(_random_k(rng)) for _ in range(n)) for _ in range(dimL)]
        L = [b for b in L if any(not x.is_zero() for x in b)]
        rep.cond2_checked += 1
        ok = False
        for k in range(1, depth + 1):
            w = tuple(p - q for p, q in zip(ck(k), a))
            lo, _ = dist_bounds(w, L, ts, depth)
            if sk[k] < lo:
                ok = True
                break
        if not ok:
            rep.cond2_failures.append({"a": [str(z) for z in a], "L": [[str(z) for z in b] for b in L]})

    for trial in range(samples):
        i = trial % n
        lams = {}
        for j in range(n):
            if j == i:
                continue
            if trial % 2 == 0:
                try:
                    a = residue_lead(xs[i])[1]
                    fam = next(f for f in sorted(a, key=_fam_key) if f in residues(xs[j]))
                    ei, ci = leading_term(residues(xs[i])[fam])
                    ej, cj = leading_term(residues(xs[j])[fam])
                    lams[j] = monomial(Fraction(ci) / Fraction(cj), ei - ej)
                except StopIteration:
                    lams[j] = _random_k(rng)
            else:
                lams[j] = _random_k(rng)
        k1 = rng.randint(1, max(1, depth // 2))
        lam = (cs[i][k1] - sum((lams[j] * cs[j][k1] for j in lams), ZERO_SERIES)) if trial % 3 else ZERO_SERIES
        vals = [None]
        for k in range(1, depth + 1):
            e = cs[i][k] - sum((lams[j] * cs[j][k] for j in lams), ZERO_SERIES) - lam
            vals.append(e.norm() if not e.is_zero() else ZERO)
        rep.cond3_checked += 1
        if not any(all(rk[i][k0] < vals[k] for k in range(k0 + 1, depth + 1)) for k0 in range(1, depth)):
            rep.cond3_failures.append({"i": i, "lam": str(lam), "lams": {j: str(v) for j, v in lams.items()}})
    return rep


# ---------------------------------------------------------------------------
# dual norms


@dataclass
class DualNormReport:
    """``entries[j] = (exact, lower)`` for the functional dual to basis vector ``j``."""

    primal: SpacePresentation
    entries: list

    def within(self, tol: NormValue) -> bool:
        return all(not ex < lo and not lo.is_zero and ex / lo <= tol for ex, lo in self.entries)


def dual_norm_check(P: SpacePresentation, depth: int = 24, samples: int = 40, seed: int = 0) -> DualNormReport:
    """Lower bounds ``|phi_j(v)| / ||v||`` over sampled ``v`` against exact dual norms.

    Besides random combinations the samples include ``f - sum c_i e_i`` for
    each hole vector ``f`` with ``c_i`` its partial sums up to ``depth``,
    which drive the ratio toward the supremum.
    """
    Dl = dual(P)
    B = [tuple(b) for b in Dl.dual_of.basis]
    sc = Dl.dual_of.scales
    n = len(B)
    exact = [vec_norm(f, Dl.scales) for f in Dl.basis]
    units = [j for j, b in enumerate(B) if all(x.in_K() for x in b)]
    coeff_sets = [[ONE_SERIES if l == j else ZERO_SERIES for l in range(n)] for j in range(n)]
    rng = random.Random(seed)
    for _ in range(samples):
        coeff_sets.append([random_scalar(rng) for _ in range(n)])
    for l, f in enumerate(B):
        if l in units:
            continue
        for k in range(1, depth + 1):
            cf = [ZERO_SERIES] * n
            cf[l] = ONE_SERIES
            for j in units:
                i = next(q for q, x in enumerate(B[j]) if not x.is_zero())
                unit = B[j][i].kpart
                if not f[i].is_zero() and len(unit.terms) == 1:
                    e, c = unit.terms[0]
                    cf[j] = -(best_approx(f[i], k)[0] * monomial(1 / c, -e))
            coeff_sets.append(cf)
    lower = [ZERO] * n
    for cf in coeff_sets:
        v = [KvElement() for _ in sc]
        for c, b in zip(cf, B):
            if c.is_zero():
                continue
            v = [p + q * c for p, q in zip(v, b)]
        nv = vec_norm(v, sc)
        if nv.is_zero:
            continue
        for j in range(n):
            if not cf[j].is_zero():
                lower[j] = max(lower[j], cf[j].norm() / nv)
    return DualNormReport(Dl.dual_of, list(zip(exact, lower)))


# ---------------------------------------------------------------------------
# XV_4 properties and the isometry probe


def form_a_data(P: SpacePresentation) -> dict:
    """``x, y, z, t, s`` of a presentation ``[(1,0),(0,1),(x,0),(y,z)]`` isometric to ``P``."""
    from . import _fourdim
    from .spaces import canonicalize

    C = canonicalize(P)
    if C.rank != 2 or C.space.n != 4:
        raise ValueError("not a four-dimensional space of spherical rank 2")
    got = _fourdim.analyse(C.space)
    if "y" not in got.data or "w" in got.data:
        raise ValueError(f"no presentation of the required form ({got.kind})")
    return dict(got.data)


@dataclass
class XVReport:
    strict: bool
    hb: bool
    not_orthocomplemented: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.strict and self.hb and self.not_orthocomplemented


def _coords(B, v):
    sol = span_contains(B, v)
    if sol is None:
        raise ValueError("vector outside the space")
    return sol[0], sol[1:]


def xv_corollary_check(P: SpacePresentation, depth: int = DEFAULT_DEPTH, samples: int = 12,
                       seed: int = 0) -> XVReport:
    """Strictness, extension and complement properties of ``D = [(1,0), (x,0)]``."""
    data = form_a_data(P)
    x, y, z, t, s = (data[k] for k in "xyzts")
    K0, K1 = KvElement(), KvElement(1)
    E = make_space([t, s], [[1, 0], [0, 1], [x, 0], [y, z]])
    Dv = [(K1, K0), (x, K0)]
    rng = random.Random(seed)
    det: dict = {}

    # strict: d(u, D) attained, with the oracle bracketing the value
    strict = True
    bracket = 0
    for q in range(samples):
        cf = [random_scalar(rng) for _ in range(4)] if q else [ZERO_SERIES, ZERO_SERIES, ONE_SERIES, ZERO_SERIES]
        u = tuple(sum((b[i] * c for b, c in zip(E.basis, cf)), KvElement()) for i in range(2))
        dd = distance(u, Dv, E)
        lo, hi = dist_bounds(u, Dv, E, depth)
        if dd.attained is not True or dd.value < lo or hi < dd.value:
            strict = False
        bracket += lo == hi
    det["strict_samples"] = samples
    det["oracle_tight"] = bracket

    # HB: every functional on D has a norm-preserving extension
    Dl = dual(E)
    B = [tuple(b) for b in Dl.dual_of.basis]
    H = make_space([t], [[1], [x]])
    HD = dual(H)
    HB_ = [tuple(b) for b in HD.dual_of.basis]
    hb = True
    trials = [(ONE_SERIES, ZERO_SERIES), (ZERO_SERIES, ONE_SERIES)]
    trials += [(random_scalar(rng), random_scalar(rng)) for _ in range(samples)]
    for f0, f1 in trials:
        if f0.is_zero() and f1.is_zero():
            continue
        # phi on D by its values on (1,0) and (x,0); its norm via the dual of [1, x]
        rows, rhs = [], []
        for val, vec in ((f0, (K1,)), (f1, (x,))):
            den, cs = _coords(HB_, vec)
            rows.append(cs)
            rhs.append(val * den)
        coeff = _solve2(rows, rhs)
        if coeff is None:
            hb = False
            continue
        scale_h, beta_h = coeff
        phi_vec = tuple(sum((fb[i] * c for fb, c in zip(HD.basis, beta_h)), KvElement())
                        for i in range(HD.m))
        phi_norm = vec_norm(phi_vec, HD.scales) / scale_h.norm()
        # extensions psi on E: values on d_k fixed, free on the rest
        cons = []
        for val, vec in ((f0, (K1, K0)), (f1, (x, K0))):
            den, cs = _coords(B, vec)
            cons.append((cs, val * den))
        cols = []
        for j in range(len(B)):
            cols.append({k: cons[k][0][j] for k in range(2) if not cons[k][0][j].is_zero()})
        cols.append({k: -cons[k][1] for k in range(2) if not cons[k][1].is_zero()})
        ker = _nullspace(cols)
        part = next((kv for kv in ker if not kv[-1].is_zero()), None)
        perp = [kv[:-1] for kv in ker if kv[-1].is_zero()]
        if part is None:
            hb = False
            continue
        lam = part[-1]

        def fvec(beta):
            return tuple(sum((fb[i] * c for fb, c in zip(Dl.basis, beta)), KvElement()) for i in range(Dl.m))

        got = distance(fvec(part[:-1]), [fvec(p) for p in perp], Dl)
        if got.attained is not True or got.value != phi_norm * lam.norm():
            hb = False
            det.setdefault("hb_failures", []).append((str(f0), str(f1), str(got.value), str(phi_norm)))

    # not orthocomplemented: no complement F makes D (+) F isometric
    noc = decompose(E) is None
    gamma = dist_to_K(z)[0]
    delta = distance([y], [[1], [x]], ["0"]).value
    tol = max(delta, gamma * s / t) * NormValue.pos(Fraction(-1, 8))
    from .spaces import approximate

    b0, b1 = approximate([y], [[1], [x]], ["0"], tol)
    yk = y - KvElement(b0) - x * b1
    comps = [((K0, K1), (yk, z))]
    for _ in range(samples):
        c = [random_scalar(rng) for _ in range(4)]
        comps.append(((KvElement(c[0]), K1 + KvElement(c[1])), (y + KvElement(c[2]), z + KvElement(c[3]))))
    found = 0
    for u1, u2 in comps:
        if _not_orthogonal(Dv, u1, u2, E):
            found += 1
    det["complements"] = len(comps)
    det["complements_refuted"] = found
    noc = noc and found == len(comps)
    return XVReport(strict, hb, noc, det)


def _solve2(rows, rhs):
    """``(den, beta)`` with ``sum_j rows[k][j] beta_j = den * rhs[k]``, ``den != 0``."""
    n = len(rows[0])
    cols = [{k: rows[k][j] for k in range(len(rows)) if not rows[k][j].is_zero()} for j in range(n)]
    cols.append({k: -rhs[k] for k in range(len(rows)) if not rhs[k].is_zero()})
    for kv in _nullspace(cols):
        if not kv[-1].is_zero():
            return kv[-1], kv[:-1]
    return None


def _not_orthogonal(D, u1, u2, E) -> bool:
    """A norm defect showing ``span(u1, u2)`` is not an orthogonal complement of ``D``."""
    if distance(u1, D, E).value < E.norm(u1):
        return True
    if distance(u2, D, E).value < E.norm(u2):
        return True
    return distance(u2, D + [u1], E).value < distance(u2, [u1], E).value


def xv_conjecture_probe(P1: SpacePresentation, P2: SpacePresentation) -> dict:
    """The three conjectured invariants and the classifier's isometry verdict.

    Records observations only; no conclusion is drawn.
    """
    from .classify import isometric
    from .holes import equiv

    a, b = form_a_data(P1), form_a_data(P2)
    scales_match = (a["t"] / b["t"]).in_vk() and (a["s"] / b["s"]).in_vk()
    classes_match = equiv(a["x"], b["x"]) and equiv(a["z"], b["z"])
    sub1 = make_space([ONE], [[1], [a["x"]], [a["y"]]])
    sub2 = make_space([ONE], [[1], [b["x"]], [b["y"]]])
    return {
        "scales_in_value_group": scales_match,
        "x_and_z_equivalent": classes_match,
        "three_dim_isometric": isometric(sub1, sub2).kind,
        "isometric": isometric(P1, P2).kind,
    }
