"""Weak-head evaluation, Kan operations, eliminators, readback and conversion.

Values are weak-head normal Terms: canonical forms keep their subterms
unevaluated, neutrals are stuck on a variable head or a neutral type line.
Readback is type-directed and eta-long for Pi, Sigma and Path.
"""

from __future__ import annotations

import contextvars
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from .dimalg import (
    DName,
    FaceFormula,
    ONE,
    ZERO,
    conj_subst,
    dim_canon,
    face_conj,
    face_names,
    face_or,
    face_subst,
    fresh,
    is_const,
    neg,
)
from .syntax import (
    BUILTINS,
    App,
    Branch,
    Con,
    Elim,
    Fst,
    HComp,
    HITDecl,
    HitType,
    Lam,
    PApp,
    Pair,
    PathP,
    Pi,
    PLam,
    Sigma,
    Snd,
    Term,
    Trans,
    U,
    Var,
    alpha_eq,
    comp,
    ctrans,
    ctrans_fill,
    face_eq,
    free_dims,
    free_vars,
    hfill,
    squeeze,
    subst,
    telescope_types,
    trans_fill,
)


class KernelError(Exception):
    pass


class IllTypedInternal(KernelError):
    """Evaluation met a shape that typechecked input never produces."""


class UnsupportedUniverseKan(KernelError):
    """Kan operations in the universe need Glue types, which are not supported."""


# route Susp/Trunc constructor transport through the generic algorithm
GENERIC_TRANS: contextvars.ContextVar[bool] = contextvars.ContextVar("generic_trans", default=False)
# callback(rule, term) observing each reduction step
TRACE: contextvars.ContextVar[Optional[Callable]] = contextvars.ContextVar("trace", default=None)


def _trace(rule: str, t: Term) -> None:
    cb = TRACE.get()
    if cb is not None:
        cb(rule, t)


# --------------------------------------------------------------------------
# scopes


@dataclass(frozen=True)
class Globals:
    defs: dict = field(default_factory=dict)  # name -> body, or None for postulates
    types: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Scope:
    """Types of variables in scope plus global definitions to unfold."""

    globals: Globals = field(default_factory=Globals)
    locals: tuple = ()  # ((name, type), ...) innermost last

    def bind(self, x: str, ty: Term) -> "Scope":
        return Scope(self.globals, self.locals + ((x, ty),))

    def type_of(self, x: str) -> Term:
        for y, ty in reversed(self.locals):
            if y == x:
                return ty
        if x in self.globals.types:
            return self.globals.types[x]
        raise IllTypedInternal(f"unbound variable {x}")

    def is_local(self, x: str) -> bool:
        return any(y == x for y, _ in self.locals)

    def definition(self, x: str) -> Optional[Term]:
        if self.is_local(x):
            return None
        return self.globals.defs.get(x)

    def restrict(self, sigma: Mapping) -> "Scope":
        if not sigma:
            return self
        return Scope(self.globals, tuple((x, subst(ty, None, sigma)) for x, ty in self.locals))


EMPTY = Scope()


# --------------------------------------------------------------------------
# weak-head evaluation


def whnf(t: Term, scope: Scope = EMPTY) -> Term:
    while True:
        match t:
            case Var(x):
                body = scope.definition(x)
                if body is None:
                    return t
                _trace("unfold", t)
                t = body
            case App(f, a):
                f2 = whnf(f, scope)
                if isinstance(f2, Lam):
                    _trace("beta", t)
                    t = subst(f2.body, {f2.name: a})
                    continue
                return t if f2 is f else App(f2, a)
            case Fst(p) | Snd(p):
                p2 = whnf(p, scope)
                if isinstance(p2, Pair):
                    t = p2.fst if isinstance(t, Fst) else p2.snd
                    continue
                return type(t)(p2)
            case PApp(p, r):
                r = dim_canon(r)
                p2 = whnf(p, scope)
                if isinstance(p2, PLam):
                    _trace("path-beta", t)
                    t = subst(p2.body, None, {p2.dim: r})
                    continue
                if is_const(r):
                    ty = whnf(neutral_type(p2, scope), scope)
                    if not isinstance(ty, PathP):
                        raise IllTypedInternal(f"path application at non-path type {ty}")
                    _trace("endpoint", t)
                    t = ty.left if r is ZERO else ty.right
                    continue
                return PApp(p2, r)
            case Con():
                t2 = constructor_boundary(t)
                if t2 is None:
                    return t
                _trace("boundary", t)
                t = t2
            case HComp():
                return hcomp_value(t, scope)
            case Trans():
                return trans_value(t, scope)
            case Elim():
                return elim_value(t, scope)
            case _:
                return t


def evaluate(t: Term, scope: Scope = EMPTY, rho: Optional[Mapping] = None) -> Term:
    """Evaluate `t` under an environment `rho` of term and dimension bindings."""
    if rho:
        ts = {k: v for k, v in rho.items() if isinstance(v, Term)}
        ds = {k: v for k, v in rho.items() if not isinstance(v, Term)}
        t = subst(t, ts, ds)
    return whnf(t, scope)


def path_apply(p: Term, r, scope: Scope = EMPTY) -> Term:
    return whnf(PApp(p, r), scope)


def neutral_type(t: Term, scope: Scope) -> Term:
    """The type of a weak-head neutral (or constructor) term."""
    match t:
        case Var(x):
            return scope.type_of(x)
        case App(f, a):
            ty = whnf(neutral_type(f, scope), scope)
            if not isinstance(ty, Pi):
                raise IllTypedInternal(f"application of non-function at {ty}")
            return subst(ty.cod, {ty.name: a})
        case Fst(p):
            ty = whnf(neutral_type(p, scope), scope)
            if not isinstance(ty, Sigma):
                raise IllTypedInternal(f"projection from non-pair at {ty}")
            return ty.fst
        case Snd(p):
            ty = whnf(neutral_type(p, scope), scope)
            if not isinstance(ty, Sigma):
                raise IllTypedInternal(f"projection from non-pair at {ty}")
            return subst(ty.snd, {ty.name: Fst(p)})
        case PApp(p, r):
            ty = whnf(neutral_type(p, scope), scope)
            if not isinstance(ty, PathP):
                raise IllTypedInternal(f"path application at non-path type {ty}")
            return subst(ty.ty, None, {ty.dim: r})
        case Elim(_, x, motive, _, s):
            return subst(motive, {x: s})
        case Trans(i, a, _, _):
            return subst(a, None, {i: ONE})
        case HComp(_, a, _, _):
            return a
        case Con(h, ps, _, _, _) if h is not None and ps is not None:
            return HitType(h, ps)
    raise IllTypedInternal(f"cannot infer the type of {t!r}")


# --------------------------------------------------------------------------
# constructors


def decl_of(c: Con) -> HITDecl:
    if c.hit is None:
        if c.con == "base":
            return BUILTINS["S1"]
        raise IllTypedInternal(f"unresolved constructor {c.con}")
    return BUILTINS[c.hit]


def constructor_boundary(c: Con) -> Optional[Term]:
    """The boundary term `c` reduces to, or None when no boundary clause holds."""
    d = decl_of(c)
    k = d.con(c.con)
    if not k.boundary or not c.dims:
        return None
    ds = dict(zip(k.dims, c.dims))
    for phi, e in k.boundary:
        if face_subst(phi, ds).is_top:
            if c.params is None and d.params:
                e = _forget_params(e, d)
                ts = {x: v for (x, _), v in zip(k.args, c.args)}
                return subst(e, ts, ds)
            ts = {p: v for (p, _), v in zip(d.params, c.params or ())}
            ts.update({x: v for (x, _), v in zip(k.args, c.args)})
            return subst(e, ts, ds)
    return None


def _forget_params(e: Term, d: HITDecl) -> Term:
    params = {p for p, _ in d.params}
    match e:
        case Con(h, _, c, args, dims) if h == d.name:
            return Con(h, None, c, tuple(_forget_params(a, d) for a in args), dims)
        case Var():
            return e
    if free_vars(e) & params:
        raise IllTypedInternal(f"boundary of an unelaborated {d.name} constructor needs parameters")
    return e


def make_constructor(d: HITDecl, con: str, params, args, dims, scope: Scope = EMPTY) -> Term:
    return whnf(Con(d.name, tuple(params), con, tuple(args), tuple(dims)), scope)


# --------------------------------------------------------------------------
# hcomp


def _fresh_binder(i: str, avoid) -> str:
    return fresh(i) if i in avoid else i


def hcomp_value(t: HComp, scope: Scope = EMPTY) -> Term:
    i, a, sys, u0 = t.dim, t.ty, t.system, t.base
    sys = tuple((phi, u) for phi, u in sys if not phi.is_bot)
    for phi, u in sys:
        if phi.is_top:
            _trace("hcomp-face", t)
            return whnf(subst(u, None, {i: ONE}), scope)
    a2 = whnf(a, scope)
    match a2:
        case U():
            raise UnsupportedUniverseKan("hcomp in the universe")
        case Pi(x, _, cod):
            _trace("hcomp-pi", t)
            y = fresh(x if x != "_" else "y")
            return Lam(y, HComp(i, subst(cod, {x: Var(y)}), tuple((phi, App(u, Var(y))) for phi, u in sys), App(u0, Var(y))))
        case Sigma(x, fa, sb):
            _trace("hcomp-sigma", t)
            fsys = tuple((phi, Fst(u)) for phi, u in sys)
            filler = hfill(i, fa, fsys, Fst(u0))
            second = comp(i, subst(sb, {x: filler}), tuple((phi, Snd(u)) for phi, u in sys), Snd(u0))
            return Pair(HComp(i, fa, fsys, Fst(u0)), second)
        case PathP(j, b, l, r):
            _trace("hcomp-path", t)
            k = fresh(j)
            sides = tuple((phi, PApp(u, DName(k))) for phi, u in sys)
            sides += ((face_eq(k, 0), l), (face_eq(k, 1), r))
            return PLam(k, HComp(i, subst(b, None, {j: DName(k)}), sides, PApp(u0, DName(k))))
        case Lam() | Pair() | PLam() | Con():
            raise IllTypedInternal(f"hcomp at non-type {a2}")
    if sys is t.system and a2 is a:
        return t
    return HComp(i, a2, sys, u0)


def hcomp(i: str, a: Term, sys, u0: Term, scope: Scope = EMPTY) -> Term:
    return hcomp_value(HComp(i, a, tuple(sys), u0), scope)


# --------------------------------------------------------------------------
# trans


def trans_value(t: Trans, scope: Scope = EMPTY) -> Term:
    i, a, phi, u0 = t.dim, t.ty, t.face, t.base
    if phi.is_top:
        _trace("trans-face", t)
        return whnf(u0, scope)
    if i in free_dims(u0) or i in face_names(phi):
        j = fresh(i)
        a, i = subst(a, None, {i: DName(j)}), j
    a2 = whnf(a, scope)
    match a2:
        case U():
            raise UnsupportedUniverseKan("transport in the universe")
        case Pi(x, dom, cod):
            _trace("trans-pi", t)
            y = fresh(x if x != "_" else "y")
            l = fresh("l")
            ytil = Trans(l, subst(dom, None, {i: _join(i, neg(DName(l)))}), face_or(phi, face_eq(i, 1)), Var(y))
            y0 = subst(ytil, None, {i: ZERO})
            return Lam(y, Trans(i, subst(cod, {x: ytil}), phi, App(u0, y0)))
        case Sigma(x, fa, sb):
            _trace("trans-sigma", t)
            line = trans_fill(i, fa, phi, Fst(u0))
            return Pair(Trans(i, fa, phi, Fst(u0)), Trans(i, subst(sb, {x: line}), phi, Snd(u0)))
        case PathP(j, b, l, r):
            _trace("trans-path", t)
            k = fresh(j)
            bk = subst(b, None, {j: DName(k)})
            sides = ((phi, PApp(u0, DName(k))), (face_eq(k, 0), l), (face_eq(k, 1), r))
            return PLam(k, comp(i, bk, sides, PApp(u0, DName(k))))
        case HitType(hit, ps):
            d = BUILTINS[hit]
            if not d.params:
                _trace("trans-paramless", t)
                return whnf(u0, scope)
            v = whnf(u0, scope)
            if isinstance(v, HComp):
                _trace("trans-hcomp", t)
                j = _fresh_binder(v.dim, {i} | free_dims(a2) | face_names(phi))
                vs = v.system if j == v.dim else tuple((f, subst(u, None, {v.dim: DName(j)})) for f, u in v.system)
                sides = tuple((f, Trans(i, a2, phi, u)) for f, u in vs)
                return HComp(j, subst(a2, None, {i: ONE}), sides, Trans(i, a2, phi, v.base))
            if isinstance(v, Con):
                out = _trans_con(d, i, ps, phi, v)
                if out is not None:
                    return whnf(out, scope)
            return Trans(i, a2, phi, v)
        case Lam() | Pair() | PLam() | Con():
            raise IllTypedInternal(f"trans at non-type {a2}")
    return Trans(i, a2, phi, u0) if a2 is not a or i != t.dim else t


def _join(i: str, r):
    from .dimalg import join

    return join(DName(i), r)


def trans(i: str, a: Term, phi: FaceFormula, u0: Term, scope: Scope = EMPTY) -> Term:
    return trans_value(Trans(i, a, phi, u0), scope)


def _at(ps, i: str, r) -> tuple:
    return tuple(subst(p, None, {i: r}) for p in ps)


def _trans_con(d: HITDecl, i: str, ps: tuple, phi: FaceFormula, v: Con) -> Optional[Term]:
    """The direct per-HIT transport rules on constructor arguments."""
    ps1 = _at(ps, i, ONE)
    pmap = {p: x for (p, _), x in zip(d.params, ps)}
    if d.name in ("Susp", "Trunc") and GENERIC_TRANS.get():
        _trace("trans-generic", v)
        return generic_trans_constructor(d, i, ps, phi, v.con, v.args, v.dims)
    match d.name, v.con:
        case "Susp", ("N" | "S"):
            _trace("trans-susp-point", v)
            return Con(d.name, ps1, v.con)
        case "Susp", "merid":
            _trace("trans-merid", v)
            return Con(d.name, ps1, "merid", (ctrans(i, pmap["A"], phi, v.args[0]),), v.dims)
        case "Trunc", "inc":
            _trace("trans-inc", v)
            return Con(d.name, ps1, "inc", (ctrans(i, pmap["A"], phi, v.args[0]),))
        case "Trunc", "sq":
            _trace("trans-sq", v)
            line = HitType(d.name, ps)
            return Con(d.name, ps1, "sq", tuple(Trans(i, line, phi, x) for x in v.args), v.dims)
        case "Pushout", "inl":
            _trace("trans-inl", v)
            return Con(d.name, ps1, "inl", (ctrans(i, pmap["A"], phi, v.args[0]),))
        case "Pushout", "inr":
            _trace("trans-inr", v)
            return Con(d.name, ps1, "inr", (ctrans(i, pmap["B"], phi, v.args[0]),))
        case "Pushout", "push":
            _trace("trans-push", v)
            return pushout_trans_push(i, ps, phi, v.args[0], v.dims[0])
    return None


def pushout_trans_push(i: str, ps: tuple, phi: FaceFormula, c: Term, r) -> Term:
    """trans^i P phi (push c r) with the endpoint-correcting system."""
    a, b, cc, u, v = ps
    ps0, ps1 = _at(ps, i, ZERO), _at(ps, i, ONE)
    line = HitType("Pushout", ps)
    cfill = ctrans_fill(i, cc, phi, c)
    left = squeeze(i, line, phi, Con("Pushout", ps, "inl", (App(u, cfill),)))
    right = squeeze(i, line, phi, Con("Pushout", ps, "inr", (App(v, cfill),)))
    flip = {i: neg(DName(i))}
    sides = (
        (face_eq(r, 0), subst(left, None, flip)),
        (face_eq(r, 1), subst(right, None, flip)),
        (phi, Con("Pushout", ps0, "push", (c,), (r,))),
    )
    return HComp(i, HitType("Pushout", ps1), sides, Con("Pushout", ps1, "push", (ctrans(i, cc, phi, c),), (r,)))


def generic_trans_constructor(
    d: HITDecl, i: str, ps: tuple, psi: FaceFormula, con: str, args: tuple, dims: tuple
) -> Term:
    """Transport of a constructor along a parameter line by the uniform algorithm.

    Recursive arguments travel by transFill of the type itself, the others by
    ctransFill of their type; boundary clauses are corrected by squeeze.
    """
    c = d.con(con)
    ps0, ps1 = _at(ps, i, ZERO), _at(ps, i, ONE)
    ts = {p: x for (p, _), x in zip(d.params, ps)}
    theta = []
    for (x, ty), v in zip(c.args, args):
        line = subst(ty, ts)
        fill = trans_fill if d.is_recursive_arg(ty) else ctrans_fill
        th = fill(i, line, psi, v)
        theta.append(th)
        ts[x] = th
    w1p = Con(d.name, ps1, con, _at(theta, i, ONE), tuple(dims))
    if not c.boundary:
        # no faces to correct: the translated constructor is already the answer
        return w1p
    line = HitType(d.name, ps)
    ds = dict(zip(c.dims, dims))
    sides = []
    for phi, e in c.boundary:
        e_line = subst(e, ts, ds)
        alpha = squeeze(i, line, psi, e_line)
        sides.append((face_subst(phi, ds), subst(alpha, None, {i: neg(DName(i))})))
    sides.append((psi, Con(d.name, ps0, con, tuple(args), tuple(dims))))
    return HComp(i, HitType(d.name, ps1), tuple(sides), w1p)


# --------------------------------------------------------------------------
# eliminators


def elim_value(t: Elim, scope: Scope = EMPTY) -> Term:
    s = whnf(t.scrut, scope)
    match s:
        case Con():
            d = decl_of(s)
            br = _branch(t, s.con)
            c = d.con(s.con)
            ts = {}
            rec = iter(br.rec_vars)
            for x, (_, ty), v in zip(br.vars, c.args, s.args):
                ts[x] = v
                if d.is_recursive_arg(ty):
                    ts[next(rec)] = Elim(t.hit_ty, t.var, t.motive, t.branches, v)
            _trace("elim-con", t)
            return whnf(subst(br.body, ts, dict(zip(br.dims, s.dims))), scope)
        case HComp(i, a, sys, u0) if isinstance(whnf(a, scope), HitType):
            _trace("elim-hcomp", t)
            avoid = free_dims(t.motive) | set().union(*(free_dims(b.body) for b in t.branches))
            k = fresh(i) if i in avoid else i
            if k != i:
                sys = tuple((phi, subst(u, None, {i: DName(k)})) for phi, u in sys)
            v = hfill(k, a, sys, u0)
            again = lambda u: Elim(t.hit_ty, t.var, t.motive, t.branches, u)  # noqa: E731
            return whnf(comp(k, subst(t.motive, {t.var: v}), tuple((phi, again(u)) for phi, u in sys), again(u0)), scope)
    return t if s is t.scrut else Elim(t.hit_ty, t.var, t.motive, t.branches, s)


def _branch(t: Elim, con: str) -> Branch:
    for br in t.branches:
        if br.con == con:
            return br
    raise IllTypedInternal(f"eliminator has no branch for {con}")


def elim_apply(motive_var: str, motive: Term, branches, scrut: Term, scope: Scope = EMPTY) -> Term:
    return whnf(Elim(None, motive_var, motive, tuple(branches), scrut), scope)


# --------------------------------------------------------------------------
# readback


def readback(t: Term, ty: Term, scope: Scope = EMPTY) -> Term:
    """Beta-normal, boundary-collapsed, eta-long normal form of `t : ty`."""
    return _Readback(scope).nf(t, ty)


def nf_type(a: Term, scope: Scope = EMPTY) -> Term:
    return _Readback(scope).nf_ty(a)


def normalize(t: Term, ty: Term, scope: Scope = EMPTY) -> Term:
    return readback(t, ty, scope)


def convert(ty: Term, a: Term, b: Term, scope: Scope = EMPTY) -> bool:
    if a is b:
        return True
    return alpha_eq(readback(a, ty, scope), readback(b, ty, scope))


def convert_type(a: Term, b: Term, scope: Scope = EMPTY) -> bool:
    if a is b:
        return True
    return alpha_eq(nf_type(a, scope), nf_type(b, scope))


def _conj_key(c) -> tuple:
    return (len(c), c)


class _Readback:
    def __init__(self, scope: Scope):
        self.scope = scope

    def under(self, scope: Scope) -> "_Readback":
        return _Readback(scope)

    def nf_ty(self, a: Term) -> Term:
        a = whnf(a, self.scope)
        match a:
            case U():
                return a
            case Pi(x, dom, cod) | Sigma(x, dom, cod):
                y = fresh(x if x != "_" else "x")
                dom2 = self.nf_ty(dom)
                inner = self.under(self.scope.bind(y, dom))
                return type(a)(y, dom2, inner.nf_ty(subst(cod, {x: Var(y)})))
            case PathP(j, b, l, r):
                k = fresh(j)
                return PathP(
                    k,
                    self.nf_ty(subst(b, None, {j: DName(k)})),
                    self.nf(l, subst(b, None, {j: ZERO})),
                    self.nf(r, subst(b, None, {j: ONE})),
                )
            case HitType(h, ps):
                return HitType(h, self.params(BUILTINS[h], ps))
        return self.neutral(a)[0]

    def params(self, d: HITDecl, ps) -> tuple:
        ts, out = {}, []
        for (p, ty), v in zip(d.params, ps):
            out.append(self.nf(v, subst(ty, ts)))
            ts[p] = v
        return tuple(out)

    def nf(self, t: Term, ty: Term) -> Term:
        ty = whnf(ty, self.scope)
        match ty:
            case U():
                return self.nf_ty(t)
            case Pi(x, dom, cod):
                y = fresh(x if x != "_" else "x")
                inner = self.under(self.scope.bind(y, dom))
                return Lam(y, inner.nf(App(t, Var(y)), subst(cod, {x: Var(y)})))
            case Sigma(x, fa, sb):
                return Pair(self.nf(Fst(t), fa), self.nf(Snd(t), subst(sb, {x: Fst(t)})))
            case PathP(j, b, _, _):
                k = fresh(j)
                return PLam(k, self.nf(PApp(t, DName(k)), subst(b, None, {j: DName(k)})))
            case HitType(h, ps):
                return self.nf_hit(whnf(t, self.scope), BUILTINS[h], ps)
        v = whnf(t, self.scope)
        if isinstance(v, HComp):
            return self.nf_hcomp(v, ty)
        return self.neutral(v)[0]

    def nf_hit(self, v: Term, d: HITDecl, ps) -> Term:
        match v:
            case Con(_, _, con, args, dims):
                c = d.con(con)
                tys = telescope_types(d, c, ps, args)
                return Con(
                    d.name,
                    self.params(d, ps),
                    con,
                    tuple(self.nf(a, ty) for a, ty in zip(args, tys)),
                    tuple(dim_canon(r) for r in dims),
                )
            case HComp():
                return self.nf_hcomp(v, HitType(d.name, ps))
        return self.neutral(v)[0]

    def nf_hcomp(self, v: HComp, ty: Term) -> Term:
        k = fresh(v.dim)
        sides = []
        for phi, u in v.system:
            for c in phi.conjs:
                sides.append((c, u))
        # more specific conjunctions are implied by compatible coarser ones
        keep = []
        for c, u in sorted(sides, key=lambda cu: _conj_key(cu[0])):
            cs = set(c)
            if any(set(c2) <= cs for c2, _ in keep):
                continue
            keep.append((c, u))
        out = []
        for c, u in keep:
            sigma = conj_subst(c)
            inner = self.under(self.scope.restrict(sigma))
            body = subst(u, None, {**sigma, v.dim: DName(k)})
            out.append((face_conj(dict(c)), inner.nf(body, subst(ty, None, sigma))))
        return HComp(k, self.nf_ty(ty), tuple(out), self.nf(v.base, ty))

    def neutral(self, t: Term) -> tuple[Term, Term]:
        """Normal form and type of a neutral."""
        match t:
            case Var(x):
                return t, self.scope.type_of(x)
            case App(f, a):
                f2, fty = self.neutral(whnf(f, self.scope))
                fty = whnf(fty, self.scope)
                if not isinstance(fty, Pi):
                    raise IllTypedInternal(f"application of non-function at {fty}")
                return App(f2, self.nf(a, fty.dom)), subst(fty.cod, {fty.name: a})
            case Fst(p) | Snd(p):
                p2, pty = self.neutral(whnf(p, self.scope))
                pty = whnf(pty, self.scope)
                if not isinstance(pty, Sigma):
                    raise IllTypedInternal(f"projection from non-pair at {pty}")
                if isinstance(t, Fst):
                    return Fst(p2), pty.fst
                return Snd(p2), subst(pty.snd, {pty.name: Fst(p)})
            case PApp(p, r):
                p2, pty = self.neutral(whnf(p, self.scope))
                pty = whnf(pty, self.scope)
                if not isinstance(pty, PathP):
                    raise IllTypedInternal(f"path application at non-path type {pty}")
                return PApp(p2, dim_canon(r)), subst(pty.ty, None, {pty.dim: r})
            case Elim(_, x, motive, _, s):
                return self.nf_elim(t), subst(motive, {x: s})
            case Trans(i, a, phi, u0):
                k = fresh(i)
                line = subst(a, None, {i: DName(k)})
                return (
                    Trans(k, self.nf_ty(line), phi, self.nf(u0, subst(a, None, {i: ZERO}))),
                    subst(a, None, {i: ONE}),
                )
            case HComp(_, a, _, _):
                return self.nf_hcomp(t, a), a
        raise IllTypedInternal(f"readback of non-neutral {t!r}")

    def nf_elim(self, t: Elim) -> Term:
        s2, sty = self.neutral(whnf(t.scrut, self.scope))
        sty = whnf(sty, self.scope)
        if not isinstance(sty, HitType):
            raise IllTypedInternal(f"eliminating a non-HIT value of type {sty}")
        d, ps = BUILTINS[sty.hit], sty.params
        y = fresh(t.var)
        motive = self.under(self.scope.bind(y, sty)).nf_ty(subst(t.motive, {t.var: Var(y)}))
        branches = []
        for c in d.constructors:
            br = _branch(t, c.name)
            branches.append(self.nf_branch(t, d, ps, c, br))
        return Elim(self.nf_ty(sty), y, motive, tuple(branches), s2)

    def nf_branch(self, t: Elim, d: HITDecl, ps, c, br: Branch) -> Branch:
        scope = self.scope
        vs = [fresh(x) for x in br.vars]
        rvs = [fresh(x) for x in br.rec_vars]
        ds = [fresh(i) for i in br.dims]
        args = tuple(Var(x) for x in vs)
        tys = telescope_types(d, c, ps, args)
        rec = iter(rvs)
        ts = {}
        for x, x2, (_, decl_ty), ty in zip(br.vars, vs, c.args, tys):
            scope = scope.bind(x2, ty)
            ts[x] = Var(x2)
            if d.is_recursive_arg(decl_ty):
                r = next(rec)
                scope = scope.bind(r, subst(t.motive, {t.var: Var(x2)}))
        for x, r in zip(br.rec_vars, rvs):
            ts[x] = Var(r)
        dsub = {i: DName(k) for i, k in zip(br.dims, ds)}
        body = subst(br.body, ts, dsub)
        target = subst(t.motive, {t.var: Con(d.name, tuple(ps), c.name, args, tuple(DName(k) for k in ds))})
        return Branch(c.name, tuple(vs), tuple(rvs), tuple(ds), self.under(scope).nf(body, target))
