"""Types of normed spaces of dimension 2, 3 and 4.

Decomposable spaces are split recursively and named by their indecomposable
summands.  An indecomposable space of spherical rank 1 is named by the type
of its quotient by the K-line, which is the residue space of the hole block;
rank ``dim - 1`` gives III3 and XIII4; rank 2 in dimension 4 is handled in
``_fourdim``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache

from . import _fourdim
from .holes import HoleClass, hole_class, residue_lead
from .kvmodel import KvElement, dist_to_K
from .spaces import (
    SpacePresentation,
    Unresolved,
    _residue_space,
    canonicalize,
    decompose,
    span_contains,
)
from .valgroup import NormValue

__all__ = [
    "TypeLabel",
    "Subtype3",
    "Report",
    "Verdict",
    "ALL_LABELS",
    "parse_label",
    "classify",
    "classify2",
    "classify3",
    "classify4",
    "se",
    "dual_type",
    "hyper_symmetric",
    "isometric",
]

ROMAN = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X",
         "XI", "XII", "XIII", "XIV", "XV", "XVI", "XVII"]


@dataclass(frozen=True)
class TypeLabel:
    """``index`` is a Roman numeral for dimensions 3 and 4.

    Dimension 2 uses ``"OrthBase"`` or ``"Hole"`` (with the hole class and
    the theta coset of the scale) and dimension 1 uses ``"K"``.
    """

    dim: int
    index: str
    hole: HoleClass | None = None
    coset: int | None = None

    def __str__(self) -> str:
        if self.dim >= 3:
            return f"{self.index}_{self.dim}"
        return self.index

    def to_text(self) -> str:
        if self.index == "Hole":
            return f"Hole({self.hole.to_text()}, theta^{self.coset})"
        return str(self)


ALL_LABELS = tuple(TypeLabel(3, r) for r in ROMAN[:5]) + tuple(TypeLabel(4, r) for r in ROMAN)

_SUB = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")


def parse_label(text: str) -> TypeLabel:
    """Read ``III_3``, ``III3``, ``III₃``, ``OrthBase`` or ``K``."""
    s = text.strip().translate(_SUB)
    low = s.lower()
    if low in ("orthbase", "orth", "ob"):
        return TypeLabel(2, "OrthBase")
    if low == "k":
        return TypeLabel(1, "K")
    m = re.fullmatch(r"([IVXivx]+)[_ ]?([34])", s)
    if not m or m.group(1).upper() not in ROMAN:
        raise ValueError(f"unknown type label {text!r}")
    label = TypeLabel(int(m.group(2)), m.group(1).upper())
    if label not in ALL_LABELS:
        raise ValueError(f"unknown type label {text!r}")
    return label


@dataclass(frozen=True)
class Subtype3:
    """Class of the hole of a 2-dim subspace, of the quotient, and the scale coset."""

    x_class: HoleClass
    y_class: HoleClass
    coset: int

    def to_text(self) -> str:
        return f"({self.x_class.to_text()}, {self.y_class.to_text()}, theta^{self.coset})"


@dataclass(frozen=True)
class _Node:
    label: TypeLabel
    rank: int
    se_list: tuple
    atoms: tuple = ()
    subtype: Subtype3 | None = None
    scales: tuple = ()
    pairs: tuple = ()
    extra: dict = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class Report:
    type: TypeLabel
    rank: int
    decomposable: bool
    summands: tuple
    se: bool
    dual_type: TypeLabel
    subtype: Subtype3 | None
    invariants: dict = field(compare=False, hash=False)
    se_list: tuple = ()

    def to_dict(self) -> dict:
        out = {
            "type": str(self.type),
            "rank": self.rank,
            "decomposable": self.decomposable,
            "se": self.se,
            "dual_type": str(self.dual_type),
            "invariants": self.invariants,
        }
        if self.decomposable:
            out["summands"] = [str(s) for s in self.summands]
        if self.type.index == "Hole":
            out["type"] = self.type.to_text()
        if self.subtype is not None:
            out["subtype"] = self.subtype.to_text()
        return out


def _residue_quotient(C: SpacePresentation, m: int) -> SpacePresentation:
    """Presentation of ``C / [e_1..e_m]`` for a rank-1 canonical form (``m = 1``)."""
    vecs, sc = _residue_space([tuple(b) for b in C.basis[m:]], C.scales)
    return SpacePresentation(tuple(sc), tuple(vecs))


def _atoms_label(atoms: list[_Node], n: int) -> TypeLabel:
    kinds = sorted(str(a.label) for a in atoms)
    ks = kinds.count("K")
    holes = [a for a in atoms if a.label.index == "Hole"]
    big = [a for a in atoms if a.label.dim == 3]
    if ks == n:
        return TypeLabel(n, "OrthBase") if n == 2 else TypeLabel(n, "I")
    if n == 3:
        return TypeLabel(3, "II")
    if len(holes) == 1 and ks == 2:
        return TypeLabel(4, "II")
    if big:
        return TypeLabel(4, {"III": "III", "IV": "IV", "V": "V"}[big[0].label.index])
    h1, h2 = holes
    x, t1 = h1.extra["x"], h1.scales[0]
    z, t2 = h2.extra["x"], h2.scales[0]
    ratio = (t1 * dist_to_K(x)[0]) / (t2 * dist_to_K(z)[0])
    if hole_class(x) != hole_class(z) and ratio.in_vk():
        return TypeLabel(4, "VI")
    return TypeLabel(4, "VII")


@lru_cache(maxsize=512)
def _analyse(P: SpacePresentation) -> _Node:
    n = P.n
    if n == 0:
        return _Node(TypeLabel(0, "0"), 0, ())
    cf = canonicalize(P)
    C, m = cf.space, cf.rank
    if n == 1:
        return _Node(TypeLabel(1, "K"), 1, (), scales=C.scales)
    dec = decompose(P)
    if dec is not None:
        atoms = []
        for part in (dec.first, dec.second):
            node = _analyse(part)
            atoms.extend(node.atoms if node.atoms else [node])
        label = _atoms_label(atoms, n)
        se_list = tuple(s for a in atoms for s in a.se_list)
        return _Node(label, m, se_list, tuple(atoms), scales=C.scales)
    fs = [tuple(b) for b in C.basis[m:]]
    if n == 2:
        x, t = fs[0][0], C.scales[0]
        label = TypeLabel(2, "Hole", hole_class(x), t.coset())
        return _Node(label, 1, (t,), scales=(t,), pairs=((t.coset(), hole_class(x)),), extra={"x": x})
    if m == n - 1:
        label = TypeLabel(n, "III" if n == 3 else "XIII")
        pairs = tuple(sorted(((s.coset(), hole_class(x)) for s, x in zip(C.scales, fs[0])),
                             key=repr))
        return _Node(label, m, tuple(C.scales), scales=C.scales, pairs=pairs)
    if m == 1:
        t = C.scales[0]
        R = _residue_quotient(C, 1)
        sub = _analyse(R)
        se_list = (t,) + sub.se_list
        if n == 3:
            if sub.label.index == "OrthBase":
                return _Node(TypeLabel(3, "IV"), 1, se_list, scales=(t,), extra={"R": R})
            subtype = Subtype3(hole_class(fs[0][0]), sub.label.hole, t.coset())
            return _Node(TypeLabel(3, "V"), 1, se_list, subtype=subtype, scales=(t,), extra={"R": R})
        idx = {"I": "VIII", "II": "IX", "III": "X", "IV": "XI", "V": "XII"}[sub.label.index]
        pairs = ()
        if idx == "VIII":
            pairs = tuple(sorted(((t.coset(), c) for c in _orthogonal_classes(R, fs)), key=repr))
        return _Node(TypeLabel(4, idx), 1, se_list, scales=(t,), pairs=pairs, extra={"R": R})
    if n == 4 and m == 2:
        got = _fourdim.analyse(C)
        if got.kind == "split":
            raise Unresolved("rank-2 analysis split a space the decomposer kept whole")
        return _Node(TypeLabel(4, got.kind), 2, got.se_list, scales=C.scales, extra=got.data)
    raise Unresolved(f"no classification rule for dimension {n} and rank {m}")


def _orthogonal_classes(R: SpacePresentation, fs: list) -> list[HoleClass]:
    """Classes of hole-block elements whose residues form an orthogonal base of ``R``."""
    cf = canonicalize(R)
    out = []
    for u in cf.witness.sources:
        rel = span_contains(R.basis, u)
        acc = KvElement()
        for f, c in zip(fs, rel[1:]):
            acc = acc + f[0] * c
        out.append(hole_class(acc))
    return out


def _report(node: _Node) -> Report:
    label = node.label
    if label.dim >= 3:
        dual = dual_type(label)
    else:
        dual = label
    se_val = all(not s.in_vk() for s in node.se_list)
    inv = {
        "scale_cosets": sorted(s.coset() for s in node.scales),
        "se_scales": [s.to_text() for s in node.se_list],
    }
    if node.pairs:
        inv["classes"] = [c.to_text() for _, c in node.pairs]
    return Report(label, node.rank, bool(node.atoms), tuple(a.label for a in node.atoms), se_val,
                  dual, node.subtype or _atom_subtype(node), inv, node.se_list)


def _atom_subtype(node: _Node):
    for a in node.atoms:
        if a.subtype is not None:
            return a.subtype
    return None


def classify(P: SpacePresentation) -> Report:
    """Type, rank, (SE) and dual type of a space of dimension at most 4."""
    if P.n > 4:
        raise ValueError("classification covers dimensions up to 4")
    return _report(_analyse(P))


def classify2(P: SpacePresentation) -> TypeLabel:
    if P.n != 2:
        raise ValueError("classify2 expects a 2-dimensional space")
    return _analyse(P).label


def classify3(P: SpacePresentation) -> Report:
    if P.n != 3:
        raise ValueError("classify3 expects a 3-dimensional space")
    return classify(P)


def classify4(P: SpacePresentation) -> Report:
    if P.n != 4:
        raise ValueError("classify4 expects a 4-dimensional space")
    return classify(P)


def se(P: SpacePresentation) -> bool:
    """Whether every norm-one functional on a subspace extends with norm one."""
    if P.n <= 1:
        return True
    return classify(P).se


_DUAL = {
    3: {"I": "I", "II": "II", "III": "IV", "IV": "III", "V": "V"},
    4: {"I": "I", "II": "II", "III": "IV", "IV": "III", "V": "V", "VI": "VI", "VII": "VII",
        "VIII": "XIII", "XIII": "VIII", "IX": "XIV", "XIV": "IX", "X": "X", "XI": "XVI",
        "XVI": "XI", "XII": "XII", "XV": "XV", "XVII": "XVII"},
}


def dual_type(label: TypeLabel) -> TypeLabel:
    if label.dim in (3, 4):
        return TypeLabel(label.dim, _DUAL[label.dim][label.index])
    return label


def hyper_symmetric(P: SpacePresentation) -> bool:
    """Rank 1 at every stage of the quotient-by-the-K-line recursion."""
    if P.n <= 1:
        return True
    cf = canonicalize(P)
    if cf.rank != 1:
        return False
    return hyper_symmetric(_residue_quotient(cf.space, 1))


@dataclass(frozen=True)
class Verdict:
    """``kind`` is ``"Yes"``, ``"No"`` or ``"Unknown"``; ``reason`` names the invariant or open problem."""

    kind: str
    reason: str

    def __bool__(self) -> bool:
        return self.kind == "Yes"


def _cosets(node: _Node) -> list:
    if node.atoms:
        return sorted(c for a in node.atoms for c in _cosets(a))
    return sorted(s.coset() for s in node.scales)


def _iso(a: _Node, b: _Node) -> Verdict:
    if a.label.dim != b.label.dim:
        return Verdict("No", "dimension")
    if a.label != b.label:
        return Verdict("No", f"type {a.label.to_text()} vs {b.label.to_text()}")
    if set(_cosets(a)) != set(_cosets(b)):
        return Verdict("No", "theta cosets of the norm values")
    idx = a.label.index
    if idx in ("K", "OrthBase", "I"):
        if _cosets(a) == _cosets(b):
            return Verdict("Yes", "orthogonal bases with matching scale cosets")
        return Verdict("No", "scale cosets of the orthogonal bases")
    if idx == "Hole":
        return Verdict("Yes", "equal hole class and scale coset")
    if a.atoms:
        if len(a.atoms) != len(b.atoms):
            return Verdict("No", "number of indecomposable summands")
        complete = all(x.label.index in ("K", "Hole") for x in a.atoms + b.atoms)
        for perm in itertools.permutations(b.atoms):
            verdicts = [_iso(x, y) for x, y in zip(a.atoms, perm)]
            if all(v.kind == "Yes" for v in verdicts):
                return Verdict("Yes", "summands match pairwise")
        if complete:
            return Verdict("No", "no pairing of the summands preserves their invariants")
        return Verdict("Unknown", "summand isometry undecided")
    if idx == "V" and a.label.dim == 3:
        if a.subtype != b.subtype:
            return Verdict("No", "subtype")
        return Verdict("Unknown", "open problem: subtype sufficiency for V_3")
    if idx == "XV":
        return Verdict("Unknown", "open conjecture on XV_4 isometry classes")
    if idx in ("III", "VIII", "XIII") and a.pairs and b.pairs:
        if a.pairs == b.pairs:
            return Verdict("Yes", "matching hole classes and scale cosets")
        if len({c for c, _ in a.pairs}) == len(a.pairs) == len({c for c, _ in b.pairs}):
            return Verdict("No", "hole classes attached to the scale cosets")
        return Verdict("Unknown", "class pairing undecided for tied cosets")
    return Verdict("Unknown", f"no complete invariant implemented for {a.label}")


def isometric(P1: SpacePresentation, P2: SpacePresentation) -> Verdict:
    if P1.n != P2.n:
        return Verdict("No", "dimension")
    return _iso(_analyse(P1), _analyse(P2))
