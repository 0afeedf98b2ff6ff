"""Acceptance criteria 1-11, one PASS/FAIL line each in the terminal summary.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import random
import sys
import time

import pytest

from holefield.classify import ALL_LABELS, classify, dual_type, parse_label, se
from holefield.kvmodel import Catalog
from holefield.spaces import UnsupportedFamily, _combine, decompose, direct_sum, dual, make_space, quotient, random_scalar
from holefield.suites import run_suite
from holefield.witness import build_witness, norms_off_group, violating_witness

from acceptance_log import record

# label: (spherical rank, decomposable, dual type, off-group norms force (SE))
TYPE_TABLE = {
    "I_3": (3, True, "I_3", True),
    "II_3": (2, True, "II_3", True),
    "III_3": (2, False, "IV_3", True),
    "IV_3": (1, False, "III_3", True),
    "V_3": (1, False, "V_3", False),
    "I_4": (4, True, "I_4", True),
    "II_4": (3, True, "II_4", True),
    "III_4": (3, True, "IV_4", True),
    "IV_4": (2, True, "III_4", True),
    "V_4": (2, True, "V_4", False),
    "VI_4": (2, True, "VI_4", True),
    "VII_4": (2, True, "VII_4", True),
    "VIII_4": (1, False, "XIII_4", True),
    "IX_4": (1, False, "XIV_4", False),
    "X_4": (1, False, "X_4", False),
    "XI_4": (1, False, "XVI_4", False),
    "XII_4": (1, False, "XII_4", False),
    "XIII_4": (3, False, "VIII_4", True),
    "XIV_4": (2, False, "IX_4", False),
    "XV_4": (2, False, "XV_4", True),
    "XVI_4": (2, False, "XI_4", False),
    "XVII_4": (2, False, "XVII_4", True),
}

# Duals the engine cannot type: these spaces are only known up to subtype,
# and whether subtypes determine the dual is open.
UNSUPPORTED_DUALS = {"V_3", "V_4", "IX_4", "X_4", "XI_4", "XII_4", "XIV_4", "XVI_4"}

LABELS = [str(L) for L in ALL_LABELS]


def test_table_covers_all_labels():
    assert set(TYPE_TABLE) == set(LABELS)


# 1


def test_c1_witness_types():
    start = time.perf_counter()
    wrong = []
    for name in LABELS:
        rep = classify(build_witness(name, "offgroup").space)
        rank, dec, _, _ = TYPE_TABLE[name]
        ok = str(rep.type) == name and rep.rank == rank and rep.decomposable == dec
        record(1, name, ok, "" if ok else f"{name} classified as {rep.type}")
        if not ok:
            wrong.append(name)
    elapsed = time.perf_counter() - start
    record(1, "runtime", elapsed < 60, f"{elapsed:.1f}s")
    assert not wrong
    assert elapsed < 60


# 2


def test_c2_dual_type_is_involution():
    bad = [n for n in LABELS if str(dual_type(dual_type(parse_label(n)))) != n
           or str(dual_type(parse_label(n))) != TYPE_TABLE[n][2]]
    record(2, "involution", not bad)
    assert not bad


@pytest.mark.parametrize("name", [
    pytest.param(n, marks=pytest.mark.xfail(strict=True, raises=UnsupportedFamily,
                                            reason="dual known only up to subtype"))
    if n in UNSUPPORTED_DUALS else n
    for n in LABELS
])
def test_c2_dual_witness(name):
    W = build_witness(name, "offgroup").space
    record(2, name, False, "unsupported duals")
    D = dual(W)
    assert str(classify(D).type) == TYPE_TABLE[name][2]
    assert str(classify(dual(D)).type) == name
    record(2, name, True)


# 3


@pytest.mark.parametrize("name", LABELS)
def test_c3_se_off_group(name):
    W = build_witness(name, "offgroup").space
    forced = TYPE_TABLE[name][3]
    assert norms_off_group(W)
    ok = se(W)
    if not forced:
        V = violating_witness(name).space
        ok = ok and str(classify(V).type) == name and norms_off_group(V) and not se(V)
    record(3, name, ok)
    assert ok


# 4-6, 9-11 share the batch suites with the CLI check command


@pytest.mark.parametrize("criterion,suite", [
    (4, "dual"), (5, "holes"), (6, "mobius"), (9, "distance"), (10, "ball"), (11, "xv"),
])
def test_suites(criterion, suite):
    res = run_suite(suite)[0]
    note = ""
    if suite == "distance":
        note = f"{res.details['equal_bounds']} equal bounds"
    record(criterion, suite, res.passed, note)
    assert res.passed, res.details


def test_c9_equal_bounds_count():
    res = run_suite("distance")[0]
    assert res.details["instances"] == 30
    assert not res.details["outside"]
    assert res.details["equal_bounds"] >= 25


# 7


RANK_ONE = ["IV_3", "V_3", "VIII_4", "IX_4", "X_4", "XI_4", "XII_4"]


@pytest.mark.parametrize("name", RANK_ONE)
def test_c7_quotients_agree(name):
    P = build_witness(name, "offgroup").space
    assert TYPE_TABLE[name][0] == 1
    rng = random.Random(name)
    reps = []
    for _ in range(5):
        u = _combine(P.basis, [random_scalar(rng) for _ in range(P.n)], P.m)
        reps.append(classify(quotient(P, u)))
    types = {str(r.type) for r in reps}
    ses = {r.se for r in reps}
    ok = len(types) == 1 and len(ses) == 1
    record(7, name, ok)
    assert ok, types


# 8


def _cat():
    c = Catalog()
    for j in range(1, 5):
        c.add_basic(f"g{j}", 1, j)
    c.add_nested("n12", "g1", "g2")
    return c


def _form_a(x, y, z, t, s):
    return make_space([t, s], [[1, 0], [0, 1], [x, 0], [y, z]])


def _cases():
    c = _cat()
    g1, g2, g3, g4 = (c[f"g{j}"].element() for j in range(1, 5))
    n12 = c["n12"].element()
    hyper = lambda x, y, t, s: make_space([t, s], [[1, 0], [0, 1], [x, y]])
    # (name, presentation, summand dimensions or the indecomposable type)
    return [
        ("hyperplane, matched levels", hyper(g1, g2, "0", "0"), "III_3"),
        ("hyperplane, first level higher", hyper(g1, g3, "0", "1"), [1, 2]),
        ("hyperplane, second level higher", hyper(g1, g3, "1", "0"), [1, 2]),
        ("hyperplane, equivalent holes", hyper(g1, g1, "0", "0"), [1, 2]),
        ("form A, t*delta below s*gamma", _form_a(g1, g2, g3, "1", "0"), [2, 2]),
        ("form A, t*delta above s*gamma", _form_a(g1, g2, g3, "0", "1"), [1, 3]),
        ("form A, matched, residue equivalent", _form_a(g1, n12, g2, "0", "1"), [1, 3]),
        ("form A, matched, residue inequivalent", _form_a(g1, n12, g3, "0", "1"), "XIV_4"),
        ("form A, matched, holes equivalent", _form_a(g1, g2, g2, "0", "0"), [2, 2]),
        ("form A, matched, holes inequivalent", _form_a(g1, g2, g3, "0", "0"), "XV_4"),
        ("line plus hole", direct_sum(make_space(["theta"], [[1]]), make_space(["0"], [[1], [g1]])), [1, 2]),
        ("two hole rows, residue rank 2", make_space(["0", "0"], [[1, 0], [0, 1], [g1, g2], [g3, g4]]),
         "XVII_4"),
    ]


CASES = _cases()


@pytest.mark.parametrize("idx", range(len(CASES)), ids=[c[0] for c in CASES])
def test_c8_decompositions(idx):
    name, P, want = CASES[idx]
    got = decompose(P)
    if isinstance(want, str):
        ok = got is None and str(classify(P).type) == want
    else:
        ok = (got is not None and sorted([got.first.n, got.second.n]) == want
              and got.witness.check(samples=100) and got.to_canonical.check(samples=100))
    record(8, name, ok)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
