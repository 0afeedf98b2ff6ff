"""TOML documents holding a catalog, named spaces and options.

    [options]
    depth = 12

    [[generator]]
    id = "g1"
    kind = "basic"
    level = "1"
    family = 1

    [[generator]]
    id = "n1"
    kind = "nested"
    outer = "g1"
    inner = "g2"

    [space.W]
    scales = ["theta"]
    basis = [["1"], ["g1"], ["n1"]]

Serialization is canonical: elements are written through the atom form, so
equal presentations print identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import tomli
import tomli_w

from .kvmodel import Catalog, InvalidGenerator, KvElement, UnknownGenerator, parse_element
from .series import monomial
from .spaces import SpacePresentation, make_space
from .valgroup import Exponent, parse_exponent

__all__ = ["DocumentError", "Document", "load_document", "dump_document", "element_text",
           "presentation_dict", "parse_vector"]


class DocumentError(ValueError):
    """Malformed document; the message names the offending block."""


@dataclass
class Document:
    catalog: Catalog
    spaces: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)


def _generator(cat: Catalog, k: int, g: Any) -> None:
    where = f"generator[{k}]"
    if not isinstance(g, dict):
        raise DocumentError(f"{where}: expected a table")
    try:
        gid = g["id"]
        kind = g.get("kind", "basic")
        if kind == "basic":
            level = g.get("level", "1")
            cat.add_basic(gid, parse_exponent(str(level)), int(g["family"]))
        elif kind == "nested":
            cat.add_nested(gid, g["outer"], g["inner"])
        else:
            raise DocumentError(f"{where}: unknown kind {kind!r}")
    except KeyError as e:
        raise DocumentError(f"{where}: missing key {e}") from None
    except (InvalidGenerator, UnknownGenerator, ValueError) as e:
        if isinstance(e, DocumentError):
            raise
        raise DocumentError(f"{where}: {e}") from None


def _space(cat: Catalog, name: str, body: Any) -> SpacePresentation:
    where = f"space.{name}"
    if not isinstance(body, dict) or "scales" not in body or "basis" not in body:
        raise DocumentError(f"{where}: needs 'scales' and 'basis'")
    try:
        scales = [parse_exponent(str(s)) for s in body["scales"]]
        basis = [[parse_element(str(x), cat) for x in row] for row in body["basis"]]
        return make_space(scales, basis)
    except UnknownGenerator as e:
        raise DocumentError(f"{where}: unknown generator {e}") from None
    except (ValueError, TypeError) as e:
        raise DocumentError(f"{where}: {e}") from None


def load_document(text: str) -> Document:
    """Parse a document; :class:`tomli.TOMLDecodeError` carries line and column."""
    data = tomli.loads(text)
    cat = Catalog()
    for k, g in enumerate(data.get("generator", [])):
        _generator(cat, k, g)
    spaces = {name: _space(cat, name, body) for name, body in data.get("space", {}).items()}
    opts = data.get("options", {})
    if not isinstance(opts, dict):
        raise DocumentError("options: expected a table")
    return Document(cat, spaces, dict(opts))


class _Names:
    """Catalog ids for atoms, declaring generators for atoms the catalog lacks."""

    def __init__(self, cat: Catalog):
        self.cat = cat.copy()
        self.by_atom = {}
        for g in self.cat:
            self.by_atom.setdefault(g.atom, g)
        self.count = 0

    def _fresh(self, stem: str) -> str:
        while True:
            self.count += 1
            gid = f"{stem}{self.count}"
            if gid not in self.cat:
                return gid

    def get(self, atom):
        if atom in self.by_atom:
            return self.by_atom[atom]
        if atom[0] == "H":
            key = atom[1]
            j, b = (key, 0) if isinstance(key, int) else key
            g = self.cat.add_basic(self._fresh("a"), Exponent(0, b), j)
        else:
            fam = atom[1]
            outer = self.get(("H", fam))
            inner = self.get(atom[2])
            g = self.cat.add_nested(self._fresh("a"), outer.id, inner.id)
        self.by_atom[atom] = g
        return g


def element_text(x: KvElement, names: _Names) -> str:
    """Canonical text of ``x`` over the generators in ``names``."""
    parts = []
    if not x.kpart.is_zero():
        parts.append(str(x.kpart))
    terms = []
    for atom, c in x.atoms().items():
        g = names.get(atom)
        coeff = c.shift(-g.shift) if g.shift else c
        terms.append((g.id, coeff))
    for gid, c in sorted(terms):
        cs = str(c)
        if cs == "1":
            parts.append(gid)
        elif " " in cs:
            parts.append(f"({cs})*{gid}")
        else:
            parts.append(f"{cs}*{gid}")
    return " + ".join(parts) if parts else "0"


def _gen_dict(g) -> dict:
    if g.kind == "nested":
        return {"id": g.id, "kind": "nested", "outer": g.outer, "inner": g.inner}
    return {"id": g.id, "kind": "basic", "level": str(g.level), "family": g.family if isinstance(g.family, int)
            else g.family[0]}


def presentation_dict(P: SpacePresentation, names: _Names) -> dict:
    return {"scales": [s.to_text() for s in P.scales],
            "basis": [[element_text(x, names) for x in row] for row in P.basis]}


def dump_document(catalog: Catalog, spaces: dict, options: dict | None = None) -> str:
    """TOML text; atoms outside ``catalog`` get fresh generator declarations."""
    names = _Names(catalog)
    body = {name: presentation_dict(P, names) for name, P in spaces.items()}
    out: dict = {}
    if options:
        out["options"] = dict(options)
    gens = [_gen_dict(g) for g in names.cat if g.kind != "atom"]
    if gens:
        out["generator"] = gens
    out["space"] = body
    return tomli_w.dumps(out)


def parse_vector(text: str, catalog: Catalog) -> tuple:
    """``"(1, g1)"`` or ``"1, g1"`` as a tuple of elements."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    try:
        return tuple(parse_element(p, catalog) for p in s.split(","))
    except UnknownGenerator as e:
        raise DocumentError(f"vector: unknown generator {e}") from None
    except ValueError as e:
        raise DocumentError(f"vector: {e}") from None


def scalar_text(c) -> str:
    return str(c if not isinstance(c, int) else monomial(c, 0))
