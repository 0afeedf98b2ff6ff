"""A concrete model of elements of the completion beyond the base field.

Every generator is a monomial multiple of an *atom*:

* ``H(j)`` is the basic hole ``sum_{n>=1} t^{-1/(n^2 + p_j)}`` where ``p_j``
  is the j-th prime.  Its absolute value is ``e^{1/(1+p_j)}`` and its
  distance to the base field is 1.  A weighted family ``(j, b)`` adds the
  dyadic lower approximation ``floor(b*theta*2^n)/2^n`` to the n-th exponent,
  so its terms accumulate at ``b*theta`` and its distance is ``e^{-b*theta}``.
* ``N(a, X)`` is the nested atom ``sum_tau tau * (H(a) - H(a)_{k(tau)})``
  over the indexed terms ``tau`` of the atom ``X``, where ``H(a)_k`` is the
  partial sum of the first ``k`` terms.  ``X`` must not involve family ``a``.

Each term carries an *index*: the ``n`` of its outermost factor
``t^{-1/(n^2+p_a)}`` (base-field terms have index 0).  Grouping an element
by outer family ``a`` gives its residue ``Z_a = c_H + sum_X c_X X``; the
element then equals ``N_a[Z_a]`` plus base-field terms, where ``N_a[Z]``
sums ``zeta * t^{-1/(n^2+p_a)}`` over indexed terms ``zeta`` of ``Z`` and
``n > k(zeta)``.  Two facts drive everything else:

* ``d(x, K) = max_a |Z_a| * e^{-b_a*theta}`` and the distance is never
  attained off ``K``;
* the tails beyond depth ``d`` of terms sharing an exponent cancel when
  their coefficients do, so precision is computed on merged exponents.

>>> cat = Catalog()
>>> g1 = cat.add_basic("g1", level=1, family=1)
>>> str(expand(g1.element(), 2))
't^(2/3) + t^(5/6) + O(t^(10/11))'
>>> kv_norm(g1.element())
Pos(2/3, 0)
>>> kv_norm(g1.element() + 1)
Pos(0, 0)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .series import TruncSeries, monomial, parse_series
from .valgroup import ZERO as NV_ZERO, Exponent, NormValue, parse_exponent

__all__ = [
    "Catalog",
    "Generator",
    "KvElement",
    "UnknownGenerator",
    "InvalidGenerator",
    "DEFAULT_DEPTH",
    "prime",
    "epsilon",
    "family_index",
    "family_level",
    "expand",
    "kv_norm",
    "leading_term",
    "dist_to_K",
    "residues",
    "parse_element",
    "atom_str",
]

DEFAULT_DEPTH = 16
_MAX_DEPTH = 4096

Scalar = Union[int, Fraction, TruncSeries]
Atom = tuple
Family = Union[int, tuple]


class UnknownGenerator(KeyError):
    pass


class InvalidGenerator(ValueError):
    pass


@lru_cache(maxsize=None)
def prime(j: int) -> int:
    """The j-th prime, ``prime(1) == 2``."""
    if j < 1:
        raise ValueError("families are numbered from 1")
    found = []
    n = 2
    while len(found) < j:
        if all(n % p for p in found if p * p <= n):
            found.append(n)
        n += 1
    return found[-1]


def family_index(family: Family) -> int:
    """The prime index ``j`` of a family key ``j`` or ``(j, b)``."""
    return family[0] if isinstance(family, tuple) else family


def family_weight(family: Family) -> int:
    return family[1] if isinstance(family, tuple) else 0


def family_level(family: Family) -> NormValue:
    """``e^{-b*theta}``, the accumulation level of the family's exponents."""
    return NormValue.pos(0, family_weight(family))


def _theta_floor(b: int, n: int) -> Fraction:
    """``floor(b*sqrt(2)*2^n) / 2^n``, non-decreasing in ``n``."""
    q = 1 << n
    root = math.isqrt(2 * b * b * q * q)
    if b >= 0:
        return Fraction(root, q)
    exact = root * root == 2 * b * b * q * q
    return Fraction(-root if exact else -root - 1, q)


@lru_cache(maxsize=None)
def epsilon(family: Family, n: int) -> Fraction:
    """Exponent offset of the n-th term of a family.

    ``-1/(n^2 + p_j)`` for family ``j``; a weighted family ``(j, b)`` adds
    the dyadic approximation of ``b*theta`` from below.
    """
    base = Fraction(-1, n * n + prime(family_index(family)))
    b = family_weight(family)
    return base + _theta_floor(b, n) if b else base


def atom_families(atom: Atom) -> frozenset[int]:
    if atom[0] == "H":
        return frozenset((atom[1],))
    return frozenset((atom[1],)) | atom_families(atom[2])


def _family_str(family: Family) -> str:
    b = family_weight(family)
    return f"{family_index(family)}w{b}" if b else str(family)


def atom_str(atom: Atom) -> str:
    if atom[0] == "H":
        return f"H{_family_str(atom[1])}"
    return f"N{_family_str(atom[1])}[{atom_str(atom[2])}]"


def _scalar(c: Scalar) -> TruncSeries:
    if isinstance(c, TruncSeries):
        if not c.is_exact:
            raise ValueError("coefficients must be exact series")
        return c
    return monomial(Fraction(c), 0)


@dataclass(frozen=True)
class Generator:
    """A named generator ``t^shift * atom``.

    ``kind`` is ``"basic"``, ``"nested"`` or ``"atom"`` (an anonymous atom
    produced internally).  ``level`` is the accumulation level: ``d(g, K)``
    equals ``e^{-level}``.  ``family`` is the key ``j`` or ``(j, b)``.
    """

    id: str
    kind: str
    shift: Fraction
    atom: Atom = field(compare=True)
    level: Exponent = field(compare=False, default=Exponent(Fraction(0)))
    family: Family | None = field(compare=False, default=None)
    outer: str | None = field(compare=False, default=None)
    inner: str | None = field(compare=False, default=None)

    def element(self) -> KvElement:
        return KvElement(combo={self: monomial(1, 0)})


def _atom_generator(atom: Atom) -> Generator:
    return Generator(id=atom_str(atom), kind="atom", shift=Fraction(0), atom=atom)


class Catalog:
    """Named generators; ids are unique and resolve to normalized atoms."""

    def __init__(self) -> None:
        self._gens: dict[str, Generator] = {}

    def __contains__(self, gid: str) -> bool:
        return gid in self._gens

    def __getitem__(self, gid: str) -> Generator:
        try:
            return self._gens[gid]
        except KeyError:
            raise UnknownGenerator(gid) from None

    def __iter__(self):
        return iter(self._gens.values())

    def __len__(self) -> int:
        return len(self._gens)

    def ids(self) -> list[str]:
        return list(self._gens)

    def _check_new(self, gid: str) -> None:
        if not gid or gid in self._gens:
            raise InvalidGenerator(f"duplicate or empty generator id {gid!r}")
        if gid == "t" or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", gid):
            raise InvalidGenerator(f"bad generator id {gid!r}")

    def add_basic(self, gid: str, level: Scalar | Exponent | str, family: int) -> Generator:
        """``t^a H(family)``, or its weighted version when ``level = a + b*theta``.

        A prime index may carry only one theta weight within a catalog.
        """
        self._check_new(gid)
        if int(family) != family or family < 1:
            raise InvalidGenerator("family must be a positive integer")
        j = int(family)
        if isinstance(level, str):
            level = parse_exponent(level)
        lvl = level if isinstance(level, Exponent) else Exponent(Fraction(level))
        for g in self._gens.values():
            if g.kind == "basic" and family_index(g.family) == j and family_weight(g.family) != lvl.b:
                raise InvalidGenerator(f"family {j} is already declared with another theta weight")
        key: Family = (j, lvl.b) if lvl.b else j
        gen = Generator(gid, "basic", lvl.a, ("H", key), level=lvl, family=key)
        self._gens[gid] = gen
        return gen

    def add_nested(self, gid: str, outer: str, inner: str) -> Generator:
        """``sum_m tau_m (g - g_{k(tau_m)})`` over the terms of ``inner``.

        ``outer`` must be a basic generator whose family does not occur in
        ``inner``; the result is ``t^{level(outer)+shift(inner)} N(a, X)``.
        """
        self._check_new(gid)
        out = self[outer]
        inn = self[inner]
        if out.kind != "basic":
            raise InvalidGenerator("the outer generator of a nested one must be basic")
        if family_index(out.family) in {family_index(f) for f in atom_families(inn.atom)}:
            raise InvalidGenerator("inner generator must not involve the outer family")
        atom = ("N", out.family, inn.atom)
        shift = out.shift + inn.shift
        lvl = Exponent(shift + _atom_valuation(inn.atom), family_weight(out.family))
        gen = Generator(gid, "nested", shift, atom, level=lvl, family=out.family,
                        outer=outer, inner=inner)
        self._gens[gid] = gen
        return gen

    def copy(self) -> Catalog:
        other = Catalog()
        other._gens = dict(self._gens)
        return other


class KvElement:
    """``kpart + sum_g c_g * g`` with exact series coefficients.

    Equality and hashing use the normalized atom form, so ``t*g`` equals a
    generator declared one level higher in the same family.
    """

    __slots__ = ("kpart", "combo", "_atoms", "_hash")

    def __init__(self, kpart: Scalar = 0, combo: Mapping[Generator, Scalar] | None = None):
        self.kpart = _scalar(kpart)
        clean: dict[Generator, TruncSeries] = {}
        for g, c in (combo or {}).items():
            s = _scalar(c)
            if g in clean:
                s = clean[g] + s
            clean[g] = s
        self.combo = {g: c for g, c in clean.items() if not c.is_zero()}
        self._atoms = None
        self._hash = None

    @classmethod
    def from_atoms(cls, kpart: TruncSeries, atoms: Mapping[Atom, TruncSeries]) -> KvElement:
        return cls(kpart, {_atom_generator(a): c for a, c in atoms.items()})

    def atoms(self) -> dict[Atom, TruncSeries]:
        if self._atoms is None:
            acc: dict[Atom, TruncSeries] = {}
            for g, c in self.combo.items():
                s = c.shift(g.shift) if g.shift else c
                acc[g.atom] = acc[g.atom] + s if g.atom in acc else s
            self._atoms = {a: c for a, c in acc.items() if not c.is_zero()}
        return self._atoms

    def key(self) -> tuple:
        return (self.kpart, frozenset(self.atoms().items()))

    def in_K(self) -> bool:
        return not self.atoms()

    def is_zero(self) -> bool:
        return self.kpart.is_zero() and not self.atoms()

    def generators(self) -> list[Generator]:
        return list(self.combo)

    def __add__(self, other: KvElement | Scalar) -> KvElement:
        o = _coerce(other)
        combo = dict(self.combo)
        for g, c in o.combo.items():
            combo[g] = combo[g] + c if g in combo else c
        return KvElement(self.kpart + o.kpart, combo)

    __radd__ = __add__

    def __neg__(self) -> KvElement:
        return KvElement(-self.kpart, {g: -c for g, c in self.combo.items()})

    def __sub__(self, other: KvElement | Scalar) -> KvElement:
        return self + (-_coerce(other))

    def __rsub__(self, other: Scalar) -> KvElement:
        return _coerce(other) - self

    def __mul__(self, other: Scalar) -> KvElement:
        if isinstance(other, KvElement):
            if other.in_K():
                return self * other.kpart
            if self.in_K():
                return other * self.kpart
            raise TypeError("products of two holes leave the generator span")
        s = _scalar(other)
        return KvElement(self.kpart * s, {g: c * s for g, c in self.combo.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, TruncSeries)):
            other = KvElement(other)
        if not isinstance(other, KvElement):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self) -> str:
        return f"KvElement({self})"

    def __str__(self) -> str:
        parts = []
        if not self.kpart.is_zero():
            parts.append(str(self.kpart))
        for g, c in self.combo.items():
            cs = str(c)
            if cs == "1":
                parts.append(g.id)
            elif " " in cs:
                parts.append(f"({cs})*{g.id}")
            else:
                parts.append(f"{cs}*{g.id}")
        return " + ".join(parts) if parts else "0"


def _coerce(x: KvElement | Scalar) -> KvElement:
    return x if isinstance(x, KvElement) else KvElement(x)


# -- expansion ---------------------------------------------------------

def _group(kpart: TruncSeries, atoms: Mapping[Atom, TruncSeries]):
    """Split into the base-field part and one residue per outer family."""
    fams: dict[int, tuple[TruncSeries, dict[Atom, TruncSeries]]] = {}
    for atom, c in atoms.items():
        a = atom[1]
        zk, za = fams.get(a, (TruncSeries(), {}))
        if atom[0] == "H":
            zk = zk + c
        else:
            inner = atom[2]
            za = dict(za)
            za[inner] = za[inner] + c if inner in za else c
        fams[a] = (zk, za)
    out = {}
    for a, (zk, za) in fams.items():
        za = {x: c for x, c in za.items() if not c.is_zero()}
        if zk.is_zero() and not za:
            continue
        out[a] = (zk, za)
    return out


def _min(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@lru_cache(maxsize=4096)
def _indexed(kpart: TruncSeries, atoms: frozenset, depth: int):
    """Indexed terms ``(exponent, coeff, index)`` and a precision bound.

    Every term with exponent below the bound is listed (possibly several
    times at one exponent); the bound is ``None`` when the list is complete.
    """
    terms = [(e, c, 0) for e, c in kpart.terms]
    prec: Fraction | None = None
    for a, (zk, za) in _group(kpart, dict(atoms)).items():
        if depth <= 0:
            sub_terms, sub_prec = [], _indexed_lower(zk, za)
        else:
            sub_terms, sub_prec = _indexed(zk, frozenset(za.items()), depth - 1)
        step = epsilon(a, depth + 1)
        merged: dict[Fraction, Fraction] = {}
        for e, c, k in sub_terms:
            merged[e] = merged.get(e, Fraction(0)) + c
            for n in range(k + 1, depth + 1):
                terms.append((e + epsilon(a, n), c, n))
        live = [e for e, c in merged.items() if c != 0]
        fam_prec = None if sub_prec is None else sub_prec + step
        if live:
            fam_prec = _min(fam_prec, min(live) + step)
        prec = _min(prec, fam_prec)
    if prec is not None:
        terms = [t for t in terms if t[0] < prec]
    return terms, prec


def _indexed_lower(kpart: TruncSeries, atoms: Mapping[Atom, TruncSeries]) -> Fraction | None:
    """Precision bound of a depth-0 expansion: every term is unexpanded."""
    if not atoms:
        return None if kpart.is_zero() else kpart.terms[0][0]
    lo = kpart.terms[0][0] if not kpart.is_zero() else None
    for atom, c in atoms.items():
        lo = _min(lo, c.terms[0][0] + _atom_lower_bound(atom))
    return lo


@lru_cache(maxsize=None)
def _atom_lower_bound(atom: Atom) -> Fraction:
    """A lower bound for every exponent occurring in the atom."""
    if atom[0] == "H":
        return epsilon(atom[1], 1)
    return _atom_lower_bound(atom[2]) + epsilon(atom[1], 1)


@lru_cache(maxsize=None)
def _atom_valuation(atom: Atom) -> Fraction:
    v = kv_norm(KvElement.from_atoms(TruncSeries(), {atom: monomial(1, 0)}))
    return v.exponent.a


def expand(x: KvElement, depth: int = DEFAULT_DEPTH) -> TruncSeries:
    """Truncated series congruent to ``x`` below the returned precision.

    Generator terms with index at most ``depth`` are included; the precision
    increases with ``depth`` toward the least accumulation point of ``x``.
    """
    x = _coerce(x)
    terms, prec = _indexed(x.kpart, frozenset(x.atoms().items()), depth)
    return TruncSeries(((e, c) for e, c, _ in terms), prec)


def leading_term(x: KvElement) -> tuple[Fraction, Fraction] | None:
    """``(exponent, coefficient)`` of the leading term, ``None`` for zero."""
    x = _coerce(x)
    if x.is_zero():
        return None
    if x.in_K():
        e, c = x.kpart.terms[0]
        return e, c
    d = 2
    while d <= _MAX_DEPTH:
        s = expand(x, d)
        if s.terms:
            e, c = s.terms[0]
            return e, c
        d *= 2
    raise RuntimeError("leading term not found within the depth limit")


def kv_norm(x: KvElement) -> NormValue:
    lt = leading_term(x)
    if lt is None:
        return NV_ZERO
    return NormValue.from_valuation(lt[0])


def residues(x: KvElement) -> dict[int, KvElement]:
    """The residue ``Z_a`` of ``x`` for each outer family ``a``.

    The map ``x -> (Z_a)_a`` is linear with kernel ``K`` and isometric from
    the quotient by ``K`` onto the sup norm with weights ``family_level(a)``.
    """
    x = _coerce(x)
    return {a: KvElement.from_atoms(zk, za) for a, (zk, za) in _group(x.kpart, x.atoms()).items()}


def dist_to_K(x: KvElement) -> tuple[NormValue, bool]:
    """``(d(x, K), attained)``; attained only for ``x`` in ``K``."""
    res = residues(x)
    if not res:
        return NV_ZERO, True
    return max(kv_norm(z) * family_level(a) for a, z in res.items()), False


# -- parsing -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(t\^\(\s*-?\d+(?:/\d+)?\s*\)|t\^-?\d+(?:/\d+)?|t\b)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        pos = m.end()
        num, tpow, ident, other = m.groups()
        if num is not None:
            out.append(("num", Fraction(num)))
        elif tpow is not None:
            out.append(("t", tpow))
        elif ident is not None:
            out.append(("id", ident))
        elif other is not None and not other.isspace():
            out.append(("op", other))
    return out


def parse_element(text: str, catalog: Catalog) -> KvElement:
    """Parse a linear expression such as ``"g1 + t^(1/2)*g2 - (1 - t)*g3 + 7"``.

    >>> cat = Catalog(); _ = cat.add_basic("g1", 1, 1)
    >>> str(parse_element("2*t*g1 - 1/3", cat))
    '-1/3 + 2*t*g1'
    """
    toks = _tokens(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("end", None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr() -> KvElement:
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        acc = term() * sign
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            acc = acc + term() if op == "+" else acc - term()
        return acc

    def term() -> KvElement:
        acc = factor()
        while peek() == ("op", "*"):
            take()
            acc = acc * factor()
        return acc

    def factor() -> KvElement:
        kind, val = take()
        if kind == "num":
            return KvElement(val)
        if kind == "t":
            return KvElement(parse_series(val))
        if kind == "id":
            return catalog[val].element()
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return inner
        if (kind, val) == ("op", "-"):
            return -factor()
        raise ValueError(f"unexpected token {val!r} in {text!r}")

    result = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return result
