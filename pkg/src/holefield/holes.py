"""Decisions on elements off the base field: equivalence, scales, orthogonality.

Everything reduces to the residue vector ``(Z_a)_a`` of an element, whose
weighted sup norm is the distance to ``K``.  Two elements are equivalent
exactly when the leading parts of their residue vectors are proportional,
since ``lam*x + mu`` lies in the ball around ``y`` of radius ``d(y, K)``
precisely when ``lam*Z(x) - Z(y)`` drops below that radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .kvmodel import KvElement, dist_to_K, family_level, kv_norm, leading_term, residues
from .valgroup import NormValue

__all__ = [
    "NotAHole",
    "NotEquivalent",
    "HoleClass",
    "hole_class",
    "residue_lead",
    "equiv",
    "equiv_scale",
    "residue_orthogonal",
    "residue_dist",
]


class NotAHole(ValueError):
    """The element lies in the base field."""


class NotEquivalent(ValueError):
    """The two elements are not equivalent, so no scale exists."""


def _fam_key(a):
    return (a, 0) if isinstance(a, int) else a


def residue_lead(x: KvElement) -> tuple[NormValue, dict]:
    """``(d(x, K), {family: leading coefficient})`` over the families at that level."""
    if not isinstance(x, KvElement):
        x = KvElement(x)
    res = residues(x)
    if not res:
        raise NotAHole(f"{x} lies in K")
    vals = {a: kv_norm(z) * family_level(a) for a, z in res.items()}
    top = max(vals.values())
    return top, {a: leading_term(res[a])[1] for a, v in vals.items() if v == top}


@dataclass(frozen=True)
class HoleClass:
    """Equivalence class of an element off ``K``.

    ``signature`` lists the families at the top level with coefficients
    normalized so the first is 1; ``level`` is ``d(x, K)`` and is not part of
    the class, since equivalent elements may sit at different levels.
    """

    level: NormValue = field(compare=False)
    signature: tuple

    def families(self) -> tuple:
        return tuple(a for a, _ in self.signature)

    def to_text(self) -> str:
        parts = [f"{c}*{a}" for a, c in self.signature]
        return "[" + ", ".join(parts) + "]"


def hole_class(x: KvElement) -> HoleClass:
    level, lead = residue_lead(x)
    fams = sorted(lead, key=_fam_key)
    c0 = Fraction(lead[fams[0]])
    return HoleClass(level, tuple((a, Fraction(lead[a]) / c0) for a in fams))


def equiv(x: KvElement, y: KvElement) -> bool:
    return hole_class(x) == hole_class(y)


def equiv_scale(x: KvElement, y: KvElement) -> NormValue:
    """``|lam|`` for every admissible ``lam``: ``d(y, K) / d(x, K)``."""
    cx, cy = hole_class(x), hole_class(y)
    if cx != cy:
        raise NotEquivalent(f"{x} and {y} are not equivalent")
    return cy.level / cx.level


def _independent_over_Q(vecs: list[dict]) -> bool:
    rows = [{k: Fraction(v) for k, v in d.items() if v} for d in vecs]
    for i in range(len(rows)):
        if not rows[i]:
            return False
        piv = min(rows[i], key=_fam_key)
        for j in range(i + 1, len(rows)):
            if piv in rows[j]:
                f = rows[j][piv] / rows[i][piv]
                merged = dict(rows[j])
                for k, v in rows[i].items():
                    merged[k] = merged.get(k, 0) - f * v
                rows[j] = {k: v for k, v in merged.items() if v}
    return True


def residue_orthogonal(xs: Sequence[KvElement]) -> bool:
    """Orthogonality of the images of ``xs`` in the quotient by ``K``.

    Vectors whose norms lie in different cosets of the value group of ``K``
    never interact; within a coset the leading parts must be independent
    over the residue field.
    """
    groups: dict = {}
    for x in xs:
        level, lead = residue_lead(x)
        groups.setdefault(level.coset(), []).append(lead)
    return all(_independent_over_Q(g) for g in groups.values())


def residue_dist(x: KvElement, xs: Sequence[KvElement]):
    """``d(x, [1, xs...])``, the quotient distance from the image of ``x``.

    Returns the ``Distance`` pair ``(value, attained)``.
    """
    from .spaces import distance

    if dist_to_K(x)[0].is_zero:
        raise NotAHole(f"{x} lies in K")
    return distance([x], [[KvElement(1)]] + [[y] for y in xs], ["0"])
