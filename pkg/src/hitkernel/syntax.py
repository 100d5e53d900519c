"""Core terms, capture-avoiding substitution, alpha-equivalence, and HIT declarations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .dimalg import (
    FACE_BOT,
    DimExpr,
    DName,
    FaceFormula,
    ONE,
    dim_eq,
    dim_names,
    dim_subst,
    face_names,
    face_or,
    face_subst,
    fresh,
    join,
    meet,
)


class SchemaViolation(Exception):
    def __init__(self, clause: str, location: str):
        super().__init__(f"{location}: {clause}")
        self.clause = clause
        self.location = location


# --------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Term:
    pos: Optional[tuple[int, int]] = field(default=None, compare=False, repr=False, kw_only=True)

    def __str__(self) -> str:
        from .parser import pretty

        return pretty(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class U(Term):
    pass


@dataclass(frozen=True)
class Pi(Term):
    name: str
    dom: Term
    cod: Term


@dataclass(frozen=True)
class Lam(Term):
    name: str
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Sigma(Term):
    name: str
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Fst(Term):
    arg: Term


@dataclass(frozen=True)
class Snd(Term):
    arg: Term


@dataclass(frozen=True)
class PathP(Term):
    """Path^dim ty left right; `dim` is bound in `ty` only."""

    dim: str
    ty: Term
    left: Term
    right: Term


@dataclass(frozen=True)
class PLam(Term):
    dim: str
    body: Term


@dataclass(frozen=True)
class PApp(Term):
    path: Term
    at: DimExpr


@dataclass(frozen=True)
class HitType(Term):
    hit: str
    params: tuple = ()


@dataclass(frozen=True)
class Con(Term):
    """Constructor `con` of `hit`; params is None until elaborated."""

    hit: Optional[str]
    params: Optional[tuple]
    con: str
    args: tuple = ()
    dims: tuple = ()


System = tuple  # of (FaceFormula, Term)


@dataclass(frozen=True)
class HComp(Term):
    """hcomp^dim_ty [system] base; `dim` is bound in the system bodies only."""

    dim: str
    ty: Term
    system: System
    base: Term


@dataclass(frozen=True)
class Trans(Term):
    """trans^dim ty face base; `dim` is bound in `ty` only."""

    dim: str
    ty: Term
    face: FaceFormula
    base: Term


@dataclass(frozen=True)
class Branch:
    con: str
    vars: tuple
    rec_vars: tuple
    dims: tuple
    body: Term


@dataclass(frozen=True)
class Elim(Term):
    """elim [var : hit_ty. motive] scrut [branches]."""

    hit_ty: Optional[Term]
    var: str
    motive: Term
    branches: tuple
    scrut: Term


# --------------------------------------------------------------------------
# free names (cached on the node)


def _cache(t: Term, key: str, value):
    object.__setattr__(t, key, value)
    return value


def free(t: Term) -> tuple[frozenset, frozenset]:
    """(free term variables, free dimension names)."""
    c = t.__dict__.get("_free")
    if c is not None:
        return c
    return _cache(t, "_free", _free(t))


def free_vars(t: Term) -> frozenset:
    return free(t)[0]


def free_dims(t: Term) -> frozenset:
    return free(t)[1]


def _union(parts: Iterable[tuple[frozenset, frozenset]]):
    vs, ds = set(), set()
    for v, d in parts:
        vs |= v
        ds |= d
    return frozenset(vs), frozenset(ds)


def _bind_var(fv, name):
    return fv[0] - {name}, fv[1]


def _bind_dim(fv, name):
    return fv[0], fv[1] - {name}


_EMPTY = (frozenset(), frozenset())


def _free(t: Term):
    match t:
        case Var(n):
            return frozenset((n,)), frozenset()
        case U():
            return _EMPTY
        case Pi(x, a, b) | Sigma(x, a, b):
            return _union([free(a), _bind_var(free(b), x)])
        case Lam(x, b):
            return _bind_var(free(b), x)
        case App(f, a) | Pair(f, a):
            return _union([free(f), free(a)])
        case Fst(a) | Snd(a):
            return free(a)
        case PathP(i, a, l, r):
            return _union([_bind_dim(free(a), i), free(l), free(r)])
        case PLam(i, b):
            return _bind_dim(free(b), i)
        case PApp(p, r):
            return _union([free(p), (frozenset(), dim_names(r))])
        case HitType(_, ps):
            return _union(free(p) for p in ps)
        case Con(_, ps, _, args, dims):
            return _union(
                [free(p) for p in (ps or ())]
                + [free(a) for a in args]
                + [(frozenset(), dim_names(r)) for r in dims]
            )
        case HComp(i, a, sys, u0):
            parts = [free(a), free(u0)]
            for phi, u in sys:
                parts.append((frozenset(), face_names(phi)))
                parts.append(_bind_dim(free(u), i))
            return _union(parts)
        case Trans(i, a, phi, u0):
            return _union([_bind_dim(free(a), i), (frozenset(), face_names(phi)), free(u0)])
        case Elim(d, x, p, brs, s):
            parts = [free(s), _bind_var(free(p), x)]
            if d is not None:
                parts.append(free(d))
            for br in brs:
                fv = free(br.body)
                parts.append(
                    (fv[0] - set(br.vars) - set(br.rec_vars), fv[1] - set(br.dims))
                )
            return _union(parts)
    raise TypeError(f"not a term: {t!r}")


# --------------------------------------------------------------------------
# substitution


def subst(
    t: Term,
    tsub: Optional[Mapping[str, Term]] = None,
    dsub: Optional[Mapping[str, DimExpr]] = None,
) -> Term:
    """Simultaneous capture-avoiding substitution of term and dimension variables."""
    fv, fd = free(t)
    ts = {k: v for k, v in (tsub or {}).items() if k in fv}
    ds = {k: v for k, v in (dsub or {}).items() if k in fd}
    if not ts and not ds:
        return t
    rv, rd = set(), set()
    for v in ts.values():
        a, b = free(v)
        rv |= a
        rd |= b
    for r in ds.values():
        rd |= dim_names(r)
    return _Subst(rv, rd).go(t, ts, ds)


def term_subst(t: Term, x: str, s: Term) -> Term:
    return subst(t, {x: s})


def term_dim_subst(t: Term, sigma: Mapping[str, DimExpr]) -> Term:
    return subst(t, None, sigma)


def _face_subst(phi: FaceFormula, ds) -> FaceFormula:
    if not ds or not (face_names(phi) & ds.keys()):
        return phi
    return face_subst(phi, ds)


class _Subst:
    def __init__(self, rv: set, rd: set):
        self.rv = rv
        self.rd = rd

    def bind_var(self, x: str, ts: dict):
        ts = {k: v for k, v in ts.items() if k != x}
        if x in self.rv:
            y = fresh(x)
            ts[x] = Var(y)
            return y, ts
        return x, ts

    def bind_dim(self, i: str, ds: dict):
        ds = {k: v for k, v in ds.items() if k != i}
        if i in self.rd:
            j = fresh(i)
            ds[i] = DName(j)
            return j, ds
        return i, ds

    def go(self, t: Term, ts: dict, ds: dict) -> Term:
        fv, fd = free(t)
        if not (fv & ts.keys()) and not (fd & ds.keys()):
            return t
        go = self.go
        match t:
            case Var(n):
                return ts.get(n, t)
            case Pi(x, a, b):
                y, ts2 = self.bind_var(x, ts)
                return Pi(y, go(a, ts, ds), go(b, ts2, ds), pos=t.pos)
            case Sigma(x, a, b):
                y, ts2 = self.bind_var(x, ts)
                return Sigma(y, go(a, ts, ds), go(b, ts2, ds), pos=t.pos)
            case Lam(x, b):
                y, ts2 = self.bind_var(x, ts)
                return Lam(y, go(b, ts2, ds), pos=t.pos)
            case App(f, a):
                return App(go(f, ts, ds), go(a, ts, ds), pos=t.pos)
            case Pair(a, b):
                return Pair(go(a, ts, ds), go(b, ts, ds), pos=t.pos)
            case Fst(a):
                return Fst(go(a, ts, ds), pos=t.pos)
            case Snd(a):
                return Snd(go(a, ts, ds), pos=t.pos)
            case PathP(i, a, l, r):
                j, ds2 = self.bind_dim(i, ds)
                return PathP(j, go(a, ts, ds2), go(l, ts, ds), go(r, ts, ds), pos=t.pos)
            case PLam(i, b):
                j, ds2 = self.bind_dim(i, ds)
                return PLam(j, go(b, ts, ds2), pos=t.pos)
            case PApp(p, r):
                return PApp(go(p, ts, ds), dim_subst(r, ds), pos=t.pos)
            case HitType(h, ps):
                return HitType(h, tuple(go(p, ts, ds) for p in ps), pos=t.pos)
            case Con(h, ps, c, args, dims):
                return Con(
                    h,
                    None if ps is None else tuple(go(p, ts, ds) for p in ps),
                    c,
                    tuple(go(a, ts, ds) for a in args),
                    tuple(dim_subst(r, ds) for r in dims),
                    pos=t.pos,
                )
            case HComp(i, a, sys, u0):
                j, ds2 = self.bind_dim(i, ds)
                sys2 = tuple((_face_subst(phi, ds), go(u, ts, ds2)) for phi, u in sys)
                return HComp(j, go(a, ts, ds), sys2, go(u0, ts, ds), pos=t.pos)
            case Trans(i, a, phi, u0):
                j, ds2 = self.bind_dim(i, ds)
                return Trans(j, go(a, ts, ds2), _face_subst(phi, ds), go(u0, ts, ds), pos=t.pos)
            case Elim(d, x, p, brs, s):
                y, ts2 = self.bind_var(x, ts)
                return Elim(
                    None if d is None else go(d, ts, ds),
                    y,
                    go(p, ts2, ds),
                    tuple(self.branch(br, ts, ds) for br in brs),
                    go(s, ts, ds),
                    pos=t.pos,
                )
        raise TypeError(f"not a term: {t!r}")

    def branch(self, br: Branch, ts: dict, ds: dict) -> Branch:
        vs, rvs, dims = [], [], []
        for x in br.vars:
            y, ts = self.bind_var(x, ts)
            vs.append(y)
        for x in br.rec_vars:
            y, ts = self.bind_var(x, ts)
            rvs.append(y)
        for i in br.dims:
            j, ds = self.bind_dim(i, ds)
            dims.append(j)
        return Branch(br.con, tuple(vs), tuple(rvs), tuple(dims), self.go(br.body, ts, ds))


# --------------------------------------------------------------------------
# alpha-equivalence


def alpha_eq(a: Term, b: Term) -> bool:
    """Equality up to renaming of bound names; dim_eq on interval leaves."""
    return _Alpha().eq(a, b, {}, {}, {}, {})


class _Alpha:
    def __init__(self):
        self.n = itertools.count()

    def fresh(self) -> str:
        return f"#{next(self.n)}"

    def eq(self, a, b, va, vb, da, db) -> bool:
        if a is b and not va and not vb and not da and not db:
            return True
        eq = self.eq
        match a, b:
            case Var(x), Var(y):
                return va.get(x, x) == vb.get(y, y)
            case U(), U():
                return True
            case (Pi(x, a1, a2), Pi(y, b1, b2)) | (Sigma(x, a1, a2), Sigma(y, b1, b2)):
                if type(a) is not type(b) or not eq(a1, b1, va, vb, da, db):
                    return False
                k = self.fresh()
                return eq(a2, b2, {**va, x: k}, {**vb, y: k}, da, db)
            case Lam(x, a1), Lam(y, b1):
                k = self.fresh()
                return eq(a1, b1, {**va, x: k}, {**vb, y: k}, da, db)
            case (App(a1, a2), App(b1, b2)) | (Pair(a1, a2), Pair(b1, b2)):
                if type(a) is not type(b):
                    return False
                return eq(a1, b1, va, vb, da, db) and eq(a2, b2, va, vb, da, db)
            case (Fst(a1), Fst(b1)) | (Snd(a1), Snd(b1)):
                return type(a) is type(b) and eq(a1, b1, va, vb, da, db)
            case PathP(i, a1, al, ar), PathP(j, b1, bl, br):
                k = DName(self.fresh())
                return (
                    eq(a1, b1, va, vb, {**da, i: k}, {**db, j: k})
                    and eq(al, bl, va, vb, da, db)
                    and eq(ar, br, va, vb, da, db)
                )
            case PLam(i, a1), PLam(j, b1):
                k = DName(self.fresh())
                return eq(a1, b1, va, vb, {**da, i: k}, {**db, j: k})
            case PApp(p, r), PApp(q, s):
                return eq(p, q, va, vb, da, db) and self.dim(r, s, da, db)
            case HitType(h1, p1), HitType(h2, p2):
                return h1 == h2 and self.all(p1, p2, va, vb, da, db)
            case Con(h1, p1, c1, a1, r1), Con(h2, p2, c2, a2, r2):
                return (
                    c1 == c2
                    and (h1 == h2 or h1 is None or h2 is None)
                    and ((p1 is None) == (p2 is None))
                    and self.all(p1 or (), p2 or (), va, vb, da, db)
                    and self.all(a1, a2, va, vb, da, db)
                    and len(r1) == len(r2)
                    and all(self.dim(x, y, da, db) for x, y in zip(r1, r2))
                )
            case HComp(i, a1, s1, u1), HComp(j, a2, s2, u2):
                if not (eq(a1, a2, va, vb, da, db) and eq(u1, u2, va, vb, da, db)):
                    return False
                if len(s1) != len(s2):
                    return False
                k = DName(self.fresh())
                da2, db2 = {**da, i: k}, {**db, j: k}
                # systems are unordered; side order may follow bound names
                unused = list(s2)
                for f1, x1 in s1:
                    hit = next(
                        (n for n, (f2, x2) in enumerate(unused) if self.face(f1, f2, da, db) and eq(x1, x2, va, vb, da2, db2)),
                        None,
                    )
                    if hit is None:
                        return False
                    del unused[hit]
                return True
            case Trans(i, a1, f1, u1), Trans(j, a2, f2, u2):
                k = DName(self.fresh())
                return (
                    self.face(f1, f2, da, db)
                    and eq(a1, a2, va, vb, {**da, i: k}, {**db, j: k})
                    and eq(u1, u2, va, vb, da, db)
                )
            case Elim(d1, x, p1, bs1, s1), Elim(d2, y, p2, bs2, s2):
                if (d1 is None) != (d2 is None):
                    return False
                if d1 is not None and not eq(d1, d2, va, vb, da, db):
                    return False
                k = self.fresh()
                if not eq(p1, p2, {**va, x: k}, {**vb, y: k}, da, db):
                    return False
                if not eq(s1, s2, va, vb, da, db) or len(bs1) != len(bs2):
                    return False
                return all(self.branch(b1, b2, va, vb, da, db) for b1, b2 in zip(bs1, bs2))
        return False

    def all(self, xs, ys, va, vb, da, db) -> bool:
        return len(xs) == len(ys) and all(self.eq(x, y, va, vb, da, db) for x, y in zip(xs, ys))

    def dim(self, r, s, da, db) -> bool:
        return dim_eq(dim_subst(r, da), dim_subst(s, db))

    def face(self, f, g, da, db) -> bool:
        return face_subst(f, da) == face_subst(g, db)

    def branch(self, b1: Branch, b2: Branch, va, vb, da, db) -> bool:
        if b1.con != b2.con:
            return False
        if (len(b1.vars), len(b1.rec_vars), len(b1.dims)) != (
            len(b2.vars),
            len(b2.rec_vars),
            len(b2.dims),
        ):
            return False
        va, vb, da, db = dict(va), dict(vb), dict(da), dict(db)
        for x, y in zip(b1.vars + b1.rec_vars, b2.vars + b2.rec_vars):
            k = self.fresh()
            va[x], vb[y] = k, k
        for i, j in zip(b1.dims, b2.dims):
            k = DName(self.fresh())
            da[i], db[j] = k, k
        return self.eq(b1.body, b2.body, va, vb, da, db)


# --------------------------------------------------------------------------
# derived Kan operations (purely syntactic definitions)


def face_eq(r: DimExpr | str, bit: int) -> FaceFormula:
    from .dimalg import face_eq_dim

    return face_eq_dim(DName(r) if isinstance(r, str) else r, bit)


def squeeze(i: str, a: Term, phi: FaceFormula, u: Term) -> Term:
    """trans^j A[i := i \\/ j] (phi \\/ (i=1)) u, a line in i."""
    j = fresh("j")
    return Trans(j, subst(a, None, {i: join(DName(i), DName(j))}), face_or(phi, face_eq(i, 1)), u)


def trans_fill(i: str, a: Term, phi: FaceFormula, u0: Term) -> Term:
    """trans^j A[i := i /\\ j] (phi \\/ (i=0)) u0, a line in i."""
    j = fresh("j")
    return Trans(j, subst(a, None, {i: meet(DName(i), DName(j))}), face_or(phi, face_eq(i, 0)), u0)


def comp(i: str, a: Term, system: Iterable, u0: Term) -> Term:
    """Heterogeneous composition derived from hcomp, squeeze and trans."""
    a1 = subst(a, None, {i: ONE})
    sides = tuple((phi, squeeze(i, a, FACE_BOT, u)) for phi, u in system)
    return HComp(i, a1, sides, Trans(i, a, FACE_BOT, u0))


def ctrans(i: str, a: Term, phi: FaceFormula, u0: Term) -> Term:
    return comp(i, a, [(phi, u0)], u0)


def ctrans_fill(i: str, a: Term, phi: FaceFormula, u0: Term) -> Term:
    j = fresh("j")
    return ctrans(j, subst(a, None, {i: meet(DName(i), DName(j))}), face_or(phi, face_eq(i, 0)), u0)


def hfill(i: str, a: Term, system: Iterable, u0: Term) -> Term:
    """hcomp^j_A [phi -> u[i := i /\\ j], (i=0) -> u0] u0, a line in i."""
    j = fresh("j")
    sides = tuple((phi, subst(u, None, {i: meet(DName(i), DName(j))})) for phi, u in system)
    return HComp(j, a, sides + ((face_eq(i, 0), u0),), u0)


def system_face(system: Iterable) -> FaceFormula:
    out = FACE_BOT
    for phi, _ in system:
        out = face_or(out, phi)
    return out


# --------------------------------------------------------------------------
# higher inductive type declarations


@dataclass(frozen=True)
class Constructor:
    """c : (args) <dims> D(params) [boundary]."""

    name: str
    args: tuple  # ((name, type), ...) scoped over params and earlier args
    dims: tuple
    boundary: tuple = ()  # ((face over dims, term), ...)

    @property
    def face(self) -> FaceFormula:
        return system_face(self.boundary)


@dataclass(frozen=True)
class HITDecl:
    name: str
    params: tuple  # ((name, type), ...)
    constructors: tuple

    def constructors_names(self) -> tuple:
        return tuple(c.name for c in self.constructors)

    def con(self, name: str) -> Constructor:
        for c in self.constructors:
            if c.name == name:
                return c
        raise KeyError(name)

    def self_type(self) -> HitType:
        return HitType(self.name, tuple(Var(p) for p, _ in self.params))

    def is_recursive_arg(self, ty: Term) -> bool:
        return isinstance(ty, HitType) and ty.hit == self.name


def _loop_boundary(dims: tuple, e: Term):
    phi = FACE_BOT
    for i in dims:
        phi = face_or(phi, face_or(face_eq(i, 0), face_eq(i, 1)))
    return ((phi, e),)


def sphere_decl(n: int) -> HITDecl:
    name = f"S{n}"
    base = Con(name, (), "base")
    dims = tuple(f"i{k}" for k in range(1, n + 1)) if n > 1 else ("i",)
    return HITDecl(
        name,
        (),
        (Constructor("base", (), ()), Constructor("loop", (), dims, _loop_boundary(dims, base))),
    )


def tf_compose(first: str, second: str, s: DimExpr) -> Term:
    """first ._s second := hcomp^k_TF [(s=0) -> bF, (s=1) -> second k] (first s)."""
    k = "k"
    return HComp(
        k,
        HitType("TF"),
        (
            (face_eq(s, 0), Con("TF", (), "bF")),
            (face_eq(s, 1), Con("TF", (), second, (), (DName(k),))),
        ),
        Con("TF", (), first, (), (s,)),
    )


def _torus_decl() -> HITDecl:
    b = Con("T", (), "b")
    i, j = DName("i"), DName("j")
    both = lambda d: face_or(face_eq(d, 0), face_eq(d, 1))  # noqa: E731
    return HITDecl(
        "T",
        (),
        (
            Constructor("b", (), ()),
            Constructor("tp", (), ("i",), ((both("i"), b),)),
            Constructor("tq", (), ("i",), ((both("i"), b),)),
            Constructor(
                "surf",
                (),
                ("i", "j"),
                (
                    (both("i"), Con("T", (), "tp", (), (j,))),
                    (both("j"), Con("T", (), "tq", (), (i,))),
                ),
            ),
        ),
    )


def _torus_f_decl() -> HITDecl:
    b = Con("TF", (), "bF")
    j = DName("j")
    both = lambda d: face_or(face_eq(d, 0), face_eq(d, 1))  # noqa: E731
    return HITDecl(
        "TF",
        (),
        (
            Constructor("bF", (), ()),
            Constructor("tpF", (), ("i",), ((both("i"), b),)),
            Constructor("tqF", (), ("i",), ((both("i"), b),)),
            Constructor(
                "surfF",
                (),
                ("i", "j"),
                (
                    (face_eq("i", 0), tf_compose("tpF", "tqF", j)),
                    (face_eq("i", 1), tf_compose("tqF", "tpF", j)),
                    (both("j"), b),
                ),
            ),
        ),
    )


def _susp_decl() -> HITDecl:
    ps = (Var("A"),)
    return HITDecl(
        "Susp",
        (("A", U()),),
        (
            Constructor("N", (), ()),
            Constructor("S", (), ()),
            Constructor(
                "merid",
                (("a", Var("A")),),
                ("i",),
                (
                    (face_eq("i", 0), Con("Susp", ps, "N")),
                    (face_eq("i", 1), Con("Susp", ps, "S")),
                ),
            ),
        ),
    )


def _trunc_decl() -> HITDecl:
    self_ty = HitType("Trunc", (Var("A"),))
    return HITDecl(
        "Trunc",
        (("A", U()),),
        (
            Constructor("inc", (("a", Var("A")),), ()),
            Constructor(
                "sq",
                (("v", self_ty), ("w", self_ty)),
                ("i",),
                ((face_eq("i", 0), Var("v")), (face_eq("i", 1), Var("w"))),
            ),
        ),
    )


def _pushout_decl() -> HITDecl:
    names = ("A", "B", "C", "u", "v")
    ps = tuple(Var(n) for n in names)
    return HITDecl(
        "Pushout",
        (
            ("A", U()),
            ("B", U()),
            ("C", U()),
            ("u", Pi("_", Var("C"), Var("A"))),
            ("v", Pi("_", Var("C"), Var("B"))),
        ),
        (
            Constructor("inl", (("a", Var("A")),), ()),
            Constructor("inr", (("b", Var("B")),), ()),
            Constructor(
                "push",
                (("c", Var("C")),),
                ("i",),
                (
                    (face_eq("i", 0), Con("Pushout", ps, "inl", (App(Var("u"), Var("c")),))),
                    (face_eq("i", 1), Con("Pushout", ps, "inr", (App(Var("v"), Var("c")),))),
                ),
            ),
        ),
    )


MAX_SPHERE = 4


def _builtins() -> dict[str, HITDecl]:
    decls = [sphere_decl(n) for n in range(1, MAX_SPHERE + 1)]
    decls += [_torus_decl(), _torus_f_decl(), _susp_decl(), _trunc_decl(), _pushout_decl()]
    return {d.name: d for d in decls}


BUILTINS: dict[str, HITDecl] = _builtins()

# constructor name -> HIT names declaring it
CONSTRUCTORS: dict[str, tuple[str, ...]] = {}
for _d in BUILTINS.values():
    for _c in _d.constructors:
        CONSTRUCTORS[_c.name] = CONSTRUCTORS.get(_c.name, ()) + (_d.name,)


def lookup_hit(name: str) -> HITDecl:
    return BUILTINS[name]


def instantiate_boundary(d: HITDecl, c: Constructor, params, args, dims) -> tuple:
    """The boundary system of `c` at concrete parameters, arguments and dimensions."""
    ts = {p: v for (p, _), v in zip(d.params, params)}
    ts.update({x: v for (x, _), v in zip(c.args, args)})
    ds = dict(zip(c.dims, dims))
    return tuple((face_subst(phi, ds), subst(e, ts, ds)) for phi, e in c.boundary)


def telescope_types(d: HITDecl, c: Constructor, params, args) -> list[Term]:
    """Argument types of `c`, each instantiated with params and earlier args."""
    ts = {p: v for (p, _), v in zip(d.params, params)}
    out = []
    for (x, ty), v in zip(c.args, itertools.chain(args, itertools.repeat(None))):
        out.append(subst(ty, ts))
        if v is not None:
            ts[x] = v
    return out


# --------------------------------------------------------------------------
# schema validation


def _mentions_hit(t: Term, name: str) -> bool:
    match t:
        case HitType(h, ps):
            return h == name or any(_mentions_hit(p, name) for p in ps)
        case Con(h, ps, _, args, _):
            return h == name or any(_mentions_hit(x, name) for x in (ps or ()) + args)
        case Var() | U():
            return False
        case Pi(_, a, b) | Sigma(_, a, b) | App(a, b) | Pair(a, b):
            return _mentions_hit(a, name) or _mentions_hit(b, name)
        case Lam(_, a) | Fst(a) | Snd(a) | PLam(_, a) | PApp(a, _):
            return _mentions_hit(a, name)
        case PathP(_, a, l, r):
            return any(_mentions_hit(x, name) for x in (a, l, r))
        case HComp(_, a, sys, u0):
            return any(_mentions_hit(x, name) for x in (a, u0) + tuple(u for _, u in sys))
        case Trans(_, a, _, u0):
            return _mentions_hit(a, name) or _mentions_hit(u0, name)
        case Elim(d, _, p, brs, s):
            parts = [p, s] + ([d] if d is not None else []) + [b.body for b in brs]
            return any(_mentions_hit(x, name) for x in parts)
    return False


def _check_boundary_term(
    d: HITDecl, e: Term, allowed_cons: set, tvars: set, dvars: set, loc: str
) -> None:
    self_ty = d.self_type()
    match e:
        case Var(n):
            if n not in tvars:
                raise SchemaViolation(f"boundary mentions unbound variable {n}", loc)
        case App(Var(f), arg):
            if f not in {p for p, _ in d.params}:
                raise SchemaViolation("boundary applies a non-parameter function", loc)
            _check_boundary_arg(arg, tvars, dvars, loc)
        case Con(h, ps, c, args, dims):
            if h != d.name:
                raise SchemaViolation(f"boundary uses constructor {c} of another type", loc)
            if c not in allowed_cons:
                raise SchemaViolation(f"boundary mentions constructor {c} not declared earlier", loc)
            if ps is not None and not alpha_eq(HitType(d.name, ps), self_ty):
                raise SchemaViolation("boundary constructor at other parameters", loc)
            for a in args:
                _check_boundary_term(d, a, allowed_cons, tvars, dvars, loc)
            for r in dims:
                if not dim_names(r) <= dvars:
                    raise SchemaViolation("boundary uses a foreign dimension", loc)
        case HComp(k, ty, sys, u0):
            if not alpha_eq(ty, self_ty):
                raise SchemaViolation("hcomp in boundary must be at the type itself", loc)
            for phi, u in sys:
                if not face_names(phi) <= dvars:
                    raise SchemaViolation("hcomp face uses a foreign dimension", loc)
                _check_boundary_term(d, u, allowed_cons, tvars, dvars | {k}, loc)
            _check_boundary_term(d, u0, allowed_cons, tvars, dvars, loc)
        case _:
            raise SchemaViolation(f"boundary form {type(e).__name__} not allowed", loc)


def _check_boundary_arg(arg: Term, tvars: set, dvars: set, loc: str) -> None:
    fv, fd = free(arg)
    if not fv <= tvars or not fd <= dvars:
        raise SchemaViolation("boundary argument is not well-scoped", loc)


def hit_validate(d: HITDecl) -> list[str]:
    """Check a declaration against the constructor schema.

    Returns the list of checked clauses; raises SchemaViolation at the first
    violated one.
    """
    report = []
    params = [p for p, _ in d.params]
    for k, (p, ty) in enumerate(d.params):
        if free_dims(ty) or not free_vars(ty) <= set(params[:k]):
            raise SchemaViolation("parameter telescope is not well-scoped", f"{d.name}.{p}")
    earlier: set = set()
    for c in d.constructors:
        loc = f"{d.name}.{c.name}"
        tvars = set(params)
        for x, ty in c.args:
            if free_dims(ty):
                raise SchemaViolation("argument telescope mentions a dimension", loc)
            if not free_vars(ty) <= tvars:
                raise SchemaViolation(f"argument type of {x} is not well-scoped", loc)
            if _mentions_hit(ty, d.name) and not (
                isinstance(ty, HitType) and alpha_eq(ty, d.self_type())
            ):
                raise SchemaViolation(f"recursive occurrence in {x} is not strictly positive", loc)
            tvars.add(x)
        report.append(f"{loc}: telescope ok")
        dvars = set(c.dims)
        for phi, e in c.boundary:
            if not face_names(phi) <= dvars:
                raise SchemaViolation("boundary face mentions names outside the constructor dims", loc)
            _check_boundary_term(d, e, earlier, tvars, dvars, loc)
        if c.boundary and c.face.is_top:
            raise SchemaViolation("boundary face is 1_F", loc)
        report.append(f"{loc}: boundary ok")
        earlier.add(c.name)
    return report
