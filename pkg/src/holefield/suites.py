"""Batch cross-checks between the exact engine and the bounded oracle.

Each suite returns a :class:`SuiteResult` whose ``details`` are plain JSON
values.  The CLI ``check`` command and the acceptance tests share them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .holes import NotAHole, equiv, residue_orthogonal
from .kvmodel import Catalog, KvElement, dist_to_K, kv_norm
from .oracle import (
    CertifiedNo,
    ConsistentUpTo,
    ball_avoidance_check,
    dist_bounds,
    dual_norm_check,
    equiv_bounded,
    mobius_check,
    xv_corollary_check,
)
from .series import monomial
from .spaces import distance, make_space, random_scalar
from .valgroup import ONE, NormValue, parse_exponent
from .witness import build_witness

__all__ = ["SuiteResult", "SUITES", "random_catalog", "random_hole", "random_entry", "holes_suite",
           "dual_suite", "ball_suite", "xv_suite", "mobius_suite", "distance_suite", "run_suite",
           "DUAL_SCALES"]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "details": self.details}


def random_catalog() -> Catalog:
    """Plain families 1-4, weighted families 5-6, and two nested generators."""
    cat = Catalog()
    for j in range(1, 5):
        cat.add_basic(f"g{j}", 1, j)
    for j in (5, 6):
        cat.add_basic(f"h{j}", "1-theta", j)
    cat.add_nested("n12", "g1", "g2")
    cat.add_nested("n53", "h5", "g3")
    return cat


def random_hole(cat: Catalog, rng: random.Random) -> KvElement:
    """A random ``K``-combination of one or two catalog generators plus a ``K`` part."""
    gens = list(cat)
    x = KvElement(random_scalar(rng))
    for g in rng.sample(gens, rng.choice([1, 1, 2])):
        c = monomial(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2])),
                     Fraction(rng.randint(-2, 2), rng.choice([1, 2])))
        x = x + g.element() * c
    return x


def holes_suite(depth: int = 12, seed: int = 0, pairs: int = 50) -> SuiteResult:
    """Equivalence against residue orthogonality and the bounded oracle."""
    rng = random.Random(seed)
    cat = random_catalog()
    orth_mismatch, contradictions, certified, skipped = [], [], 0, 0
    for _ in range(pairs):
        x, y = random_hole(cat, rng), random_hole(cat, rng)
        if x.in_K() or y.in_K():
            skipped += 1
            continue
        e = equiv(x, y)
        if e == residue_orthogonal([x, y]):
            orth_mismatch.append([str(x), str(y)])
        try:
            v = equiv_bounded(x, y, depth)
        except NotAHole:
            skipped += 1
            continue
        if isinstance(v, CertifiedNo):
            certified += 1
            if e:
                contradictions.append([str(x), str(y)])
    g1, g2 = cat["g1"].element(), cat["g2"].element()
    triple = [g1, g2, g1 + g2]
    pairwise = all(not equiv(a, b) for i, a in enumerate(triple) for b in triple[i + 1:])
    triple_orth = residue_orthogonal(triple)
    ok = not orth_mismatch and not contradictions and pairwise and not triple_orth
    return SuiteResult("holes", ok, {
        "pairs": pairs, "skipped": skipped, "certified_no": certified,
        "orthogonality_mismatches": orth_mismatch, "contradictions": contradictions,
        "triple_pairwise_inequivalent": pairwise, "triple_orthogonal": triple_orth,
    })


DUAL_SCALES = ("0", "theta", "1/2")
# Ratio exact/lower may exceed 1 by at most e^{1/100}.
DUAL_TOL = NormValue(parse_exponent("-1/100"))


def dual_suite(depth: int = 24, seed: int = 0, samples: int = 40) -> SuiteResult:
    """Exact and sampled dual norms of ``[1, g1]`` at several scales."""
    cat = Catalog()
    g1 = cat.add_basic("g1", 1, 1).element()
    rows, ok = [], True
    for s in DUAL_SCALES:
        P = make_space([s], [[1], [g1]])
        rep = dual_norm_check(P, depth=depth, samples=samples, seed=seed)
        t = P.scales[0]
        r = dist_to_K(g1)[0]
        # Functionals dual to 1 and to g1, in basis order.
        want = [kv_norm(g1) / (t * r), ONE / (t * r)]
        exact = [ex for ex, _ in rep.entries]
        good = rep.within(DUAL_TOL) and exact == want
        ok &= good
        rows.append({"scale": s, "exact": [str(v) for v in exact],
                     "lower": [str(lo) for _, lo in rep.entries], "passed": good})
    return SuiteResult("dual", ok, {"depth": depth, "rows": rows})


def ball_suite(depth: int = 10, seed: int = 0, samples: int = 20) -> SuiteResult:
    """Ball avoidance on an orthogonal pair and its failure on a dependent control."""
    cat = Catalog()
    g1 = cat.add_basic("g1", 1, 1).element()
    g2 = cat.add_basic("g2", 1, 2).element()
    good = ball_avoidance_check([g1, g2], depth=depth, samples=samples, seed=seed)
    ctrl = ball_avoidance_check([g1, g1 * monomial(1, 1)], depth=depth, samples=samples, seed=seed)
    ok = good.ok and bool(ctrl.cond3_failures)
    return SuiteResult("ball", ok, {
        "orthogonal": {"cond2_failures": len(good.cond2_failures),
                       "cond3_failures": len(good.cond3_failures)},
        "control": {"cond2_failures": len(ctrl.cond2_failures),
                    "cond3_failures": len(ctrl.cond3_failures)},
    })


def xv_suite(depth: int = 12, seed: int = 0) -> SuiteResult:
    rep = xv_corollary_check(build_witness("XV_4").space, depth=depth, seed=seed)
    ok = rep.strict and rep.hb and rep.not_orthocomplemented
    return SuiteResult("xv", ok, {"strict": rep.strict, "hb": rep.hb,
                                  "not_orthocomplemented": rep.not_orthocomplemented})


def mobius_suite(depth: int = 12, seed: int = 0, samples: int = 20) -> SuiteResult:
    """Random invertible ``(a, b, c, d)`` over ``K`` acting on ``g1 t^{-2/3}``."""
    rng = random.Random(seed)
    cat = Catalog()
    x = cat.add_basic("g1", 1, 1).element() * monomial(1, Fraction(-2, 3))
    failures = []
    for _ in range(samples):
        while True:
            a, b, c, d = (random_scalar(rng) for _ in range(4))
            if not (a * d - b * c).is_zero():
                break
        rep = mobius_check(x, a, b, c, d, depth)
        if not (isinstance(rep.verdict, ConsistentUpTo) and rep.verdict.depth == depth and rep.within_ball):
            failures.append([str(a), str(b), str(c), str(d)])
    return SuiteResult("mobius", not failures, {"samples": samples, "failures": failures})


def _mono(rng: random.Random):
    return monomial(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2])),
                    Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3])))


def random_entry(cat: Catalog, rng: random.Random) -> KvElement:
    """Zero, a ``K`` monomial, or a monomial times one generator plus an optional monomial."""
    r = rng.random()
    if r < 0.15:
        return KvElement()
    if r < 0.45:
        return KvElement(_mono(rng))
    x = rng.choice(list(cat)).element() * _mono(rng)
    if r < 0.7:
        x = x + KvElement(_mono(rng))
    return x


def distance_suite(depth: int = 12, seed: int = 0, instances: int = 30, need_equal: int = 25) -> SuiteResult:
    """Engine distances against oracle brackets on random instances.

    Instances the engine hands to the oracle itself are drawn again, since
    comparing the oracle with itself certifies nothing.
    """
    rng = random.Random(seed)
    cat = random_catalog()
    outside, equal, redrawn, n = [], 0, 0, 0
    while n < instances:
        m = rng.randint(1, 3)
        D = [[random_entry(cat, rng) for _ in range(m)] for _ in range(rng.randint(1, min(3, m + 1)))]
        v = [random_entry(cat, rng) for _ in range(m)]
        if all(x.is_zero() for x in v):
            continue
        scales = [rng.choice(DUAL_SCALES) for _ in range(m)]
        d = distance(v, D, scales)
        if d.via_oracle:
            redrawn += 1
            continue
        n += 1
        lo, hi = dist_bounds(v, D, scales, depth)
        if not lo <= d.value <= hi:
            outside.append({"v": [str(x) for x in v], "D": [[str(x) for x in r] for r in D],
                            "scales": scales, "value": str(d.value), "lower": str(lo), "upper": str(hi)})
        equal += lo == hi
    ok = not outside and equal >= need_equal
    return SuiteResult("distance", ok, {"instances": instances, "equal_bounds": equal,
                                        "outside": outside, "redrawn": redrawn})


SUITES = {"holes": holes_suite, "dual": dual_suite, "ball": ball_suite, "xv": xv_suite,
          "mobius": mobius_suite, "distance": distance_suite}


def run_suite(name: str, depth: int | None = None, seed: int = 0) -> list[SuiteResult]:
    """Run one suite or ``"all"``; ``depth`` overrides each suite's pinned depth."""
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        kw = {"seed": seed}
        if depth is not None:
            kw["depth"] = depth
        out.append(SUITES[n](**kw))
    return out
