"""The interval (free De Morgan algebra on dimension names) and the face lattice.

Dimension expressions are small trees; face formulas are always stored in a
canonical antichain-DNF form so equality is structural.
"""

from __future__ import annotations

import functools

import itertools
import threading
from dataclasses import dataclass
from typing import Iterable, Mapping


# --------------------------------------------------------------------------
# fresh names


_counter = itertools.count(1)
_counter_lock = threading.Lock()


def fresh(base: str = "i") -> str:
    """Return a globally fresh name derived from `base`.

    Names of the form ``stem'N`` are reserved for generated binders.
    """
    stem = base.split("'", 1)[0] or "x"
    with _counter_lock:
        n = next(_counter)
    return f"{stem}'{n}"


# --------------------------------------------------------------------------
# dimension expressions


class DimExpr:
    __slots__ = ()

    def __str__(self) -> str:
        return show_dim(self)


@dataclass(frozen=True, repr=False)
class _Zero(DimExpr):
    def __repr__(self):
        return "ZERO"


@dataclass(frozen=True, repr=False)
class _One(DimExpr):
    def __repr__(self):
        return "ONE"


ZERO = _Zero()
ONE = _One()


@dataclass(frozen=True)
class DName(DimExpr):
    name: str


@dataclass(frozen=True)
class DNeg(DimExpr):
    arg: DimExpr


@dataclass(frozen=True)
class DMeet(DimExpr):
    left: DimExpr
    right: DimExpr


@dataclass(frozen=True)
class DJoin(DimExpr):
    left: DimExpr
    right: DimExpr


def dim(x) -> DimExpr:
    """Coerce 0, 1, a name, or a DimExpr."""
    if isinstance(x, DimExpr):
        return x
    if x == 0 or x == "0":
        return ZERO
    if x == 1 or x == "1":
        return ONE
    if isinstance(x, str):
        return DName(x)
    raise TypeError(f"not a dimension: {x!r}")


def neg(r: DimExpr) -> DimExpr:
    if r is ZERO:
        return ONE
    if r is ONE:
        return ZERO
    if isinstance(r, DNeg):
        return r.arg
    return DNeg(r)


def meet(r: DimExpr, s: DimExpr) -> DimExpr:
    if r is ZERO or s is ZERO:
        return ZERO
    if r is ONE:
        return s
    if s is ONE or r == s:
        return r
    return DMeet(r, s)


def join(r: DimExpr, s: DimExpr) -> DimExpr:
    if r is ONE or s is ONE:
        return ONE
    if r is ZERO:
        return s
    if s is ZERO or r == s:
        return r
    return DJoin(r, s)


def dim_names(r: DimExpr) -> frozenset[str]:
    match r:
        case DName(n):
            return frozenset((n,))
        case DNeg(a):
            return dim_names(a)
        case DMeet(a, b) | DJoin(a, b):
            return dim_names(a) | dim_names(b)
    return frozenset()


DimSubst = Mapping[str, DimExpr]


def dim_subst_raw(r: DimExpr, sigma: DimSubst) -> DimExpr:
    """Homomorphic image under `sigma` with only the smart-constructor collapses."""
    match r:
        case DName(n):
            return sigma.get(n, r)
        case DNeg(a):
            return neg(dim_subst_raw(a, sigma))
        case DMeet(a, b):
            return meet(dim_subst_raw(a, sigma), dim_subst_raw(b, sigma))
        case DJoin(a, b):
            return join(dim_subst_raw(a, sigma), dim_subst_raw(b, sigma))
    return r


def dim_subst(r: DimExpr, sigma: DimSubst) -> DimExpr:
    return dim_canon(dim_subst_raw(r, sigma))


# DNF over literals. The free De Morgan algebra on X is the free bounded
# distributive lattice on X + neg(X), so an irredundant antichain of literal
# sets is a normal form. Note i /\ -i is *not* zero.

Literal = tuple[str, bool]
Conj = frozenset  # of Literal


def _absorb(conjs: Iterable[frozenset]) -> frozenset:
    cs = set(conjs)
    keep = {c for c in cs if not any(d < c for d in cs)}
    return frozenset(keep)


def dim_dnf(r: DimExpr, positive: bool = True) -> frozenset:
    match r:
        case _Zero():
            return frozenset() if positive else frozenset((frozenset(),))
        case _One():
            return frozenset((frozenset(),)) if positive else frozenset()
        case DName(n):
            return frozenset((frozenset(((n, positive),)),))
        case DNeg(a):
            return dim_dnf(a, not positive)
        case DMeet(a, b) | DJoin(a, b):
            da, db = dim_dnf(a, positive), dim_dnf(b, positive)
            conjunctive = isinstance(r, DMeet) == positive
            if conjunctive:
                return _absorb(x | y for x in da for y in db)
            return _absorb(da | db)
    raise TypeError(r)


def _lit_key(lit: Literal):
    return (lit[0], not lit[1])


def _conj_key(c: frozenset):
    return (len(c), sorted(_lit_key(l) for l in c))


def dim_from_dnf(dnf: frozenset) -> DimExpr:
    out = ZERO
    for c in sorted(dnf, key=_conj_key):
        term = ONE
        for name, pos in sorted(c, key=_lit_key):
            lit = DName(name) if pos else DNeg(DName(name))
            term = lit if term is ONE else DMeet(term, lit)
        out = term if out is ZERO else DJoin(out, term)
    return out


def dim_canon(r: DimExpr) -> DimExpr:
    """Canonical representative of `r` (irredundant DNF, sorted)."""
    if r is ZERO or r is ONE or isinstance(r, DName):
        return r
    return dim_from_dnf(dim_dnf(r))


# DM4: the four-element De Morgan algebra with two negation-fixed points,
# encoded as bit pairs with neg(x, y) = (1 - y, 1 - x).
_DM4 = ((0, 0), (1, 0), (0, 1), (1, 1))


def dm4_eval(r: DimExpr, val: Mapping[str, tuple[int, int]]) -> tuple[int, int]:
    match r:
        case _Zero():
            return (0, 0)
        case _One():
            return (1, 1)
        case DName(n):
            return val[n]
        case DNeg(a):
            x, y = dm4_eval(a, val)
            return (1 - y, 1 - x)
        case DMeet(a, b):
            (x1, y1), (x2, y2) = dm4_eval(a, val), dm4_eval(b, val)
            return (x1 & x2, y1 & y2)
        case DJoin(a, b):
            (x1, y1), (x2, y2) = dm4_eval(a, val), dm4_eval(b, val)
            return (x1 | x2, y1 | y2)
    raise TypeError(r)


def _dm4_columns(names: list[str]) -> tuple[dict, int]:
    """Bit-parallel valuations: bit v of a column is that coordinate in valuation v."""
    n = len(names)
    count = 4**n
    cols = {}
    for pos, x in enumerate(names):
        lo = hi = 0
        for v in range(count):
            x_bit, y_bit = _DM4[(v >> (2 * pos)) & 3]
            lo |= x_bit << v
            hi |= y_bit << v
        cols[x] = (lo, hi)
    return cols, (1 << count) - 1


def _dm4_all(r: DimExpr, cols: dict, mask: int) -> tuple[int, int]:
    """dm4_eval at every valuation at once."""
    match r:
        case _Zero():
            return (0, 0)
        case _One():
            return (mask, mask)
        case DName(n):
            return cols[n]
        case DNeg(a):
            x, y = _dm4_all(a, cols, mask)
            return (mask & ~y, mask & ~x)
        case DMeet(a, b):
            (x1, y1), (x2, y2) = _dm4_all(a, cols, mask), _dm4_all(b, cols, mask)
            return (x1 & x2, y1 & y2)
        case DJoin(a, b):
            (x1, y1), (x2, y2) = _dm4_all(a, cols, mask), _dm4_all(b, cols, mask)
            return (x1 | x2, y1 | y2)
    raise TypeError(r)


def dim_eq(a: DimExpr, b: DimExpr) -> bool:
    """Equality in the free De Morgan algebra, decided by DM4 valuations."""
    if a == b:
        return True
    names = sorted(dim_names(a) | dim_names(b))
    cols, mask = _dm4_columns_cached(tuple(names))
    return _dm4_all(a, cols, mask) == _dm4_all(b, cols, mask)


@functools.lru_cache(maxsize=256)
def _dm4_columns_cached(names: tuple) -> tuple[dict, int]:
    return _dm4_columns(list(names))


def is_const(r: DimExpr) -> bool:
    return r is ZERO or r is ONE


def show_dim(r: DimExpr, prec: int = 0) -> str:
    """Concrete syntax: 0 1 i -r r /\\ s r \\/ s (join binds loosest)."""
    match r:
        case _Zero():
            return "0"
        case _One():
            return "1"
        case DName(n):
            return n
        case DNeg(DNeg() as a):
            return f"-({show_dim(a)})"  # "--" opens a comment
        case DNeg(a):
            return "-" + show_dim(a, 3)
        case DMeet(a, b):
            s = f"{show_dim(a, 2)} /\\ {show_dim(b, 2)}"
            return f"({s})" if prec > 2 else s
        case DJoin(a, b):
            s = f"{show_dim(a, 1)} \\/ {show_dim(b, 1)}"
            return f"({s})" if prec > 1 else s
    raise TypeError(r)


# --------------------------------------------------------------------------
# face lattice

FaceConj = tuple  # sorted tuple of (name, bit)


@dataclass(frozen=True)
class FaceFormula:
    """Canonical antichain of consistent conjunctions, sorted.

    ``()`` is 0_F and ``((),)`` is 1_F.
    """

    conjs: tuple

    def __str__(self) -> str:
        return show_face(self)

    @property
    def is_top(self) -> bool:
        return self.conjs == ((),)

    @property
    def is_bot(self) -> bool:
        return self.conjs == ()


def _face_key(c: FaceConj):
    return (len(c), c)


def _mk_face(conjs: Iterable[dict | FaceConj]) -> FaceFormula:
    sets = set()
    for c in conjs:
        items = c.items() if isinstance(c, dict) else c
        sets.add(frozenset(items))
    sets = {c for c in sets if not any(d < c for d in sets)}
    canon = sorted((tuple(sorted(c)) for c in sets), key=_face_key)
    return FaceFormula(tuple(canon))


FACE_TOP = FaceFormula(((),))
FACE_BOT = FaceFormula(())


def _merge(c1: FaceConj, c2: FaceConj) -> dict | None:
    out = dict(c1)
    for n, b in c2:
        if out.get(n, b) != b:
            return None
        out[n] = b
    return out


def face_atom(name: str, bit: int) -> FaceFormula:
    return FaceFormula((((name, bit),),))


@functools.lru_cache(maxsize=1 << 16)
def face_and(p: FaceFormula, q: FaceFormula) -> FaceFormula:
    merged = (_merge(c1, c2) for c1 in p.conjs for c2 in q.conjs)
    return _mk_face(m for m in merged if m is not None)


def face_or(p: FaceFormula, q: FaceFormula) -> FaceFormula:
    return _mk_face(p.conjs + q.conjs)


def face_conj(c: Mapping[str, int]) -> FaceFormula:
    return _mk_face([dict(c)])


def face_of_dim(r: DimExpr) -> FaceFormula:
    """Image of (r = 1) under the lattice map I -> F."""
    out = []
    for c in dim_dnf(r):
        m: dict | None = {}
        for n, pos in c:
            m = _merge(tuple(m.items()), ((n, 1 if pos else 0),))
            if m is None:
                break
        if m is not None:
            out.append(m)
    return _mk_face(out)


@functools.lru_cache(maxsize=1 << 16)
def face_eq_dim(r: DimExpr, bit: int) -> FaceFormula:
    """(r = bit) as a face formula."""
    return face_of_dim(r if bit else neg(r))


def face_entails(phi: FaceFormula, psi: FaceFormula) -> bool:
    """Every conjunction of phi extends some conjunction of psi."""
    return all(any(set(d) <= set(c) for d in psi.conjs) for c in phi.conjs)


def face_subst(phi: FaceFormula, sigma: DimSubst) -> FaceFormula:
    if not any(n in sigma for c in phi.conjs for n, _ in c):
        return phi
    out = FACE_BOT
    for c in phi.conjs:
        acc = FACE_TOP
        for n, b in c:
            r = sigma.get(n)
            atom = face_atom(n, b) if r is None else face_eq_dim(r, b)
            acc = face_and(acc, atom)
        out = face_or(out, acc)
    return out


def face_names(phi: FaceFormula) -> frozenset[str]:
    return frozenset(n for c in phi.conjs for n, _ in c)


def conj_subst(c: FaceConj) -> dict[str, DimExpr]:
    """The dimension substitution realizing a conjunction."""
    return {n: (ONE if b else ZERO) for n, b in c}


def show_face(phi: FaceFormula) -> str:
    if phi.is_bot:
        return "0F"
    if phi.is_top:
        return "1F"
    parts = []
    for c in phi.conjs:
        atoms = " /\\ ".join(f"({n}={b})" for n, b in c)
        parts.append(atoms)
    return " \\/ ".join(parts)


# raw face syntax, as produced by the parser


@dataclass(frozen=True)
class RawFace:
    pass


@dataclass(frozen=True)
class FAtom(RawFace):
    dim: DimExpr
    bit: int


@dataclass(frozen=True)
class FAnd(RawFace):
    left: RawFace
    right: RawFace


@dataclass(frozen=True)
class FOr(RawFace):
    left: RawFace
    right: RawFace


@dataclass(frozen=True)
class FConst(RawFace):
    top: bool


def face_norm(raw: RawFace | FaceFormula) -> FaceFormula:
    match raw:
        case FaceFormula():
            return _mk_face(raw.conjs)
        case FAtom(r, b):
            return face_eq_dim(r, b)
        case FAnd(a, b):
            return face_and(face_norm(a), face_norm(b))
        case FOr(a, b):
            return face_or(face_norm(a), face_norm(b))
        case FConst(top):
            return FACE_TOP if top else FACE_BOT
    raise TypeError(raw)


def boolean_valuations(names: Iterable[str]):
    names = sorted(names)
    for bits in itertools.product((0, 1), repeat=len(names)):
        yield dict(zip(names, bits))


def face_holds(phi: FaceFormula, val: Mapping[str, int]) -> bool:
    return any(all(val[n] == b for n, b in c) for c in phi.conjs)
