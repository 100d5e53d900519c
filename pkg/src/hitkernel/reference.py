"""Reference decision procedures, written independently of dimalg's.

Used only as test oracles: a brute-force rewriting normal form for interval
terms, and a semantic evaluation of faces into the two-element lattice.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Optional

from .dimalg import DimExpr, DJoin, DMeet, DName, DNeg, FAnd, FAtom, FConst, FOr, ONE, RawFace, ZERO


def _push_neg(r: DimExpr) -> DimExpr:
    """Negation normal form by the De Morgan and involution rules."""
    match r:
        case DNeg(DNeg(a)):
            return _push_neg(a)
        case DNeg(DMeet(a, b)):
            return DJoin(_push_neg(DNeg(a)), _push_neg(DNeg(b)))
        case DNeg(DJoin(a, b)):
            return DMeet(_push_neg(DNeg(a)), _push_neg(DNeg(b)))
        case DNeg(x) if x == ZERO:
            return ONE
        case DNeg(x) if x == ONE:
            return ZERO
        case DMeet(a, b):
            return DMeet(_push_neg(a), _push_neg(b))
        case DJoin(a, b):
            return DJoin(_push_neg(a), _push_neg(b))
    return r


def _absorb(ms) -> frozenset:
    ms = set(ms)
    return frozenset(m for m in ms if not any(o < m for o in ms))


def _multiply(r: DimExpr) -> frozenset:
    match r:
        case DName(n):
            return frozenset({frozenset({(n, True)})})
        case DNeg(DName(n)):
            return frozenset({frozenset({(n, False)})})
        case DMeet(a, b):
            return _absorb(x | y for x in _multiply(a) for y in _multiply(b))
        case DJoin(a, b):
            return _absorb(_multiply(a) | _multiply(b))
    if r == ONE:
        return frozenset({frozenset()})
    if r == ZERO:
        return frozenset()
    raise ValueError(f"not in negation normal form: {r!r}")


@functools.lru_cache(maxsize=1 << 14)
def rewrite_nf(r: DimExpr) -> frozenset:
    """A join of meets of literals with absorbed meets dropped.

    Literals are (name, positive); x and -x are unrelated, as in any De Morgan algebra.
    """
    return _multiply(_push_neg(r))


def rewrite_eq(a: DimExpr, b: DimExpr) -> bool:
    return rewrite_nf(a) == rewrite_nf(b)


# faces: every lattice map F -> 2 picks, per name, which of (i=0), (i=1) holds (at most one)


def face_points(names: Iterable[str]):
    names = sorted(names)
    for states in itertools.product((0, 1, None), repeat=len(names)):
        yield dict(zip(names, states))


def _nf_true(nf: frozenset, point: dict) -> bool:
    """Truth of (r = 1) at a lattice point, given r's normal form."""
    return any(all(point.get(n) == (1 if pos else 0) for n, pos in m) for m in nf)


def _dim_true(r: DimExpr, point: dict) -> bool:
    return _nf_true(rewrite_nf(r), point)


def raw_face_holds(phi: RawFace, point: dict) -> bool:
    match phi:
        case FConst(top):
            return top
        case FAtom(r, bit):
            return _dim_true(r if bit else DNeg(r), point)
        case FAnd(a, b):
            return raw_face_holds(a, point) and raw_face_holds(b, point)
        case FOr(a, b):
            return raw_face_holds(a, point) or raw_face_holds(b, point)
    raise TypeError(phi)


def raw_face_names(phi: RawFace) -> set:
    from .dimalg import dim_names

    match phi:
        case FAtom(r, _):
            return set(dim_names(r))
        case FAnd(a, b) | FOr(a, b):
            return raw_face_names(a) | raw_face_names(b)
    return set()


def _literal_masks(points: list) -> dict:
    """(name, positive) -> bitmask of the points where that literal holds."""
    out: dict = {}
    for n, pt in enumerate(points):
        for name, state in pt.items():
            if state is not None:
                key = (name, state == 1)
                out[key] = out.get(key, 0) | (1 << n)
    return out


def _nf_mask(nf: frozenset, lits: dict, full: int) -> int:
    mask = 0
    for m in nf:
        mm = full
        for lit in m:
            mm &= lits.get(lit, 0)
        mask |= mm
    return mask


def _truth_mask(phi: RawFace, points: list, lits: Optional[dict] = None) -> int:
    """Bit n is set iff phi holds at points[n]."""
    full = (1 << len(points)) - 1
    if lits is None:
        lits = _literal_masks(points)
    match phi:
        case FConst(top):
            return full if top else 0
        case FAtom(r, bit):
            return _nf_mask(rewrite_nf(r if bit else DNeg(r)), lits, full)
        case FAnd(a, b):
            return _truth_mask(a, points, lits) & _truth_mask(b, points, lits)
        case FOr(a, b):
            return _truth_mask(a, points, lits) | _truth_mask(b, points, lits)
    raise TypeError(phi)


def face_equiv(p: RawFace, q: RawFace) -> bool:
    points = list(face_points(raw_face_names(p) | raw_face_names(q)))
    lits = _literal_masks(points)
    return _truth_mask(p, points, lits) == _truth_mask(q, points, lits)
