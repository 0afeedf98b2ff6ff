"""Concrete spaces of every type over a small catalog.

Each recipe builds its generators into a fresh :class:`Catalog`, so a
witness serializes to a self-contained document.  Scale mode ``"offgroup"``
puts every free scale at ``e^{-theta}`` (outside the value group of ``K``);
``"ingroup"`` uses scale 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .classify import ALL_LABELS, ROMAN, TypeLabel, parse_label
from .holes import residue_dist, residue_orthogonal
from .kvmodel import Catalog, Generator, KvElement
from .spaces import SpacePresentation, direct_sum, make_space

__all__ = [
    "ConstructionFailed",
    "Witness",
    "MODES",
    "orthogonal_family",
    "residue_lift",
    "witness_space",
    "build_witness",
    "violating_witness",
    "VIOLATING_LABELS",
    "norms_off_group",
]

MODES = ("offgroup", "ingroup")


class ConstructionFailed(RuntimeError):
    """A recipe produced a presentation that failed its own certificate."""


@dataclass(frozen=True)
class Witness:
    label: TypeLabel
    mode: str
    space: SpacePresentation
    catalog: Catalog = field(compare=False, repr=False)


class _Gens:
    """Lazily declared generators: ``g(j)`` basic at level 1, ``h(j)`` at level ``1-theta``."""

    def __init__(self, catalog: Catalog | None = None):
        self.cat = catalog if catalog is not None else Catalog()

    def _get(self, gid: str, make: Callable[[], Generator]) -> KvElement:
        if gid not in self.cat:
            make()
        return self.cat[gid].element()

    def g(self, j: int) -> KvElement:
        return self._get(f"g{j}", lambda: self.cat.add_basic(f"g{j}", 1, j))

    def h(self, j: int) -> KvElement:
        return self._get(f"h{j}", lambda: self.cat.add_basic(f"h{j}", "1-theta", j))

    def n(self, outer: KvElement, inner: KvElement) -> KvElement:
        o, i = outer.generators()[0].id, inner.generators()[0].id
        gid = f"n_{o}_{i}"
        return self._get(gid, lambda: self.cat.add_nested(gid, o, i))


def _prune(cat: Catalog, P: SpacePresentation) -> Catalog:
    """The sub-catalog of generators that ``P`` references, in declaration order."""
    need: set[str] = set()
    stack = [g for row in P.basis for x in row for g in x.generators()]
    while stack:
        g = stack.pop()
        if g.id in need:
            continue
        need.add(g.id)
        stack.extend(cat[i] for i in (g.outer, g.inner) if i is not None)
    out = Catalog()
    out._gens = {g.id: g for g in cat if g.id in need}
    return out


def orthogonal_family(k: int, level=1, catalog: Catalog | None = None, start: int = 1) -> list[Generator]:
    """``k`` basic generators in distinct families at one level."""
    if not 1 <= k <= 8:
        raise ValueError("k must lie between 1 and 8")
    cat = catalog if catalog is not None else Catalog()
    used = {g.id for g in cat}
    gens, j = [], start
    while len(gens) < k:
        gid = f"g{j}"
        if gid not in used:
            gens.append(cat.add_basic(gid, level, j))
        j += 1
    if not residue_orthogonal([g.element() for g in gens]):
        raise ConstructionFailed("generators in distinct families lost orthogonality")
    return gens


def residue_lift(catalog: Catalog, base: str, inners: list[str]) -> list[KvElement]:
    """Nested elements ``N(base, X)`` forming a hole pair with ``base`` modulo ``K``.

    Each result ``z`` is certified by ``d(z, [1, base])`` not being attained.
    """
    out = []
    for inner in inners:
        gid = f"n_{base}_{inner}"
        if gid not in catalog:
            catalog.add_nested(gid, base, inner)
        z = catalog[gid].element()
        d = residue_dist(z, [catalog[base].element()])
        if d.attained is not False:
            raise ConstructionFailed(f"{gid} does not lift a hole over {base}: {d}")
        out.append(z)
    return out


def _hole(x, t) -> SpacePresentation:
    return make_space([t], [[1], [x]])


def _line(t) -> SpacePresentation:
    return make_space([t], [[1]])


def _form_a(x, y, z, t, s) -> SpacePresentation:
    return make_space([t, s], [[1, 0], [0, 1], [x, 0], [y, z]])


def _three(G: _Gens, idx: int, T: str) -> SpacePresentation:
    g1, g2 = G.g(1), G.g(2)
    if idx == 1:
        return make_space([T, T, T], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    if idx == 2:
        return direct_sum(_line(T), _hole(g1, T))
    if idx == 3:
        return make_space([T, T], [[1, 0], [0, 1], [g1, g2]])
    if idx == 4:
        return make_space([T], [[1], [g1], [g2]])
    return make_space([T], [[1], [g1], [G.n(g1, g2)]])


def _four(G: _Gens, idx: int, T: str, mode: str) -> SpacePresentation:
    g1, g2, g3 = G.g(1), G.g(2), G.g(3)
    if idx == 1:
        return make_space([T] * 4, [[int(i == j) for j in range(4)] for i in range(4)])
    if idx <= 5:
        return direct_sum(_line(T), _three(G, idx, T))
    if idx == 6:
        return direct_sum(_hole(g1, T), _hole(g2, T))
    if idx == 7:
        if mode == "offgroup":
            return direct_sum(_hole(g1, T), _hole(g2, "2theta"))
        return direct_sum(_hole(g1, T), _hole(g1, T))
    if idx == 8:
        return make_space([T], [[1], [g1], [g2], [g3]])
    if idx == 9:
        return make_space([T], [[1], [g1], [g2], [G.n(g1, g3)]])
    if idx == 10:
        return make_space([T], [[1], [g1], [g2], [G.n(g1, g3) + G.n(g2, G.g(4))]])
    if idx == 11:
        return make_space([T], [[1], [g1], [G.n(g1, g2)], [G.n(g1, g3)]])
    if idx == 12:
        return make_space([T], [[1], [g1], [G.n(g1, g2)], [G.n(g1, G.n(g2, g3))]])
    if idx == 13:
        return make_space([T] * 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1], [g1, g2, g3]])
    if idx == 14:
        s = "1+theta" if mode == "offgroup" else "1"
        return _form_a(g1, G.n(g1, g2), g3, T, s)
    if idx == 15:
        return _form_a(g1, g2, g3, T, T)
    if idx == 16:
        return make_space([T, T], [[1, 0], [0, 1], [g1, g2], [G.n(g1, g3), G.n(g2, g3)]])
    return make_space([T, T], [[1, 0], [0, 1], [g1, g2], [g3, G.g(4)]])


def build_witness(label, mode: str = "offgroup") -> Witness:
    """The standard witness of ``label`` in the given scale mode."""
    if isinstance(label, str):
        label = parse_label(label)
    if mode not in MODES:
        raise ValueError(f"unknown scale mode {mode!r}")
    if label not in ALL_LABELS:
        raise ConstructionFailed(f"no recipe for {label}")
    T = "theta" if mode == "offgroup" else "0"
    G = _Gens()
    idx = ROMAN.index(label.index) + 1
    P = _three(G, idx, T) if label.dim == 3 else _four(G, idx, T, mode)
    return Witness(label, mode, P, _prune(G.cat, P))


def witness_space(label, mode: str = "offgroup") -> SpacePresentation:
    return build_witness(label, mode).space


# Rows where off-group norms do not force (SE); each recipe keeps every norm
# off the value group while an inner level lands back in it.
VIOLATING_LABELS = tuple(parse_label(s) for s in
                         ("V_3", "V_4", "IX_4", "X_4", "XI_4", "XII_4", "XIV_4", "XVI_4"))


def violating_witness(label) -> Witness:
    """A space of type ``label`` with all norms off the value group that fails (SE).

    Weighted families at level ``1-theta`` against scale ``e^{-theta}`` put
    ``t*d(x, K)`` at ``e^{-1}``.
    """
    if isinstance(label, str):
        label = parse_label(label)
    if label not in VIOLATING_LABELS:
        raise ConstructionFailed(f"{label} has no violating witness")
    G = _Gens()
    T = "theta"
    h5, h6, g2, g3, g4 = G.h(5), G.h(6), G.g(2), G.g(3), G.g(4)
    v3 = make_space([T], [[1], [h5], [G.n(h5, g2)]])
    name = str(label)
    if name == "V_3":
        P = v3
    elif name == "V_4":
        P = direct_sum(_line(T), v3)
    elif name == "IX_4":
        P = make_space([T], [[1], [h5], [g2], [G.n(h5, g3)]])
    elif name == "X_4":
        P = make_space([T], [[1], [h5], [h6], [G.n(h5, g3) + G.n(h6, g4)]])
    elif name == "XI_4":
        P = make_space([T], [[1], [h5], [G.n(h5, g2)], [G.n(h5, g3)]])
    elif name == "XII_4":
        P = make_space([T], [[1], [h5], [G.n(h5, g2)], [G.n(h5, G.n(g2, g3))]])
    elif name == "XIV_4":
        P = _form_a(h5, G.n(h5, g2), h6, T, "1+theta")
    else:
        P = make_space([T, T], [[1, 0], [0, 1], [h5, h6], [G.n(h5, g3), G.n(h6, g3)]])
    return Witness(label, "offgroup", P, _prune(G.cat, P))


def norms_off_group(P: SpacePresentation) -> bool:
    """Sufficient test for ``||E||`` missing the value group of ``K``.

    A vector norm is ``s_i |v_i|`` for some coordinate and entries have norms
    in that group, so scales outside it keep every vector norm outside.
    """
    return all(s.coset() != 0 for s in P.scales)
