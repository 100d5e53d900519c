"""Bidirectional, elaborating typechecker with restricted contexts and boundary obligations.

`check` and `infer` return the elaborated term: constructor parameters are
filled in from the expected type and systems are split into conjunctions.
Restrictions Γ,φ are decided by substituting each conjunction of φ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .dimalg import (
    DName,
    FaceFormula,
    ONE,
    ZERO,
    conj_subst,
    dim_names,
    face_and,
    face_conj,
    face_names,
    face_subst,
    fresh,
    show_face,
)
from .eval import (
    Globals,
    KernelError,
    Scope,
    UnsupportedUniverseKan as _EvalUniverseKan,
    convert,
    convert_type,
    nf_type,
    readback,
    whnf,
)
from .parser import SourceModule, pretty
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
    SchemaViolation,
    Sigma,
    Snd,
    Term,
    Trans,
    U,
    Var,
    comp,
    free_vars,
    hfill,
    hit_validate,
    subst,
    telescope_types,
)

KINDS = (
    "Mismatch",
    "BoundaryMismatch",
    "SystemIncompatible",
    "ConstancyViolation",
    "ScopeError",
    "UnsupportedUniverseKan",
    "SchemaViolation",
)


class TypeCheckError(Exception):
    """A typing failure of one of the KINDS, with both sides of the failed judgment."""

    def __init__(self, kind: str, expected: str, actual: str, pos=None, face: Optional[str] = None):
        assert kind in KINDS
        self.kind = kind
        self.expected = expected
        self.actual = actual
        self.pos = pos or (0, 0)
        self.face = face
        super().__init__(self.render())

    def render(self, filename: str = "<input>") -> str:
        line, col = self.pos
        out = f"{filename}:{line}:{col}: {self.kind}: expected {self.expected} got {self.actual}"
        if self.face:
            out += f" under face {self.face}"
        return out


@dataclass(frozen=True)
class Ctx:
    scope: Scope = field(default_factory=Scope)
    dims: frozenset = frozenset()

    def bind(self, x: str, ty: Term) -> "Ctx":
        return Ctx(self.scope.bind(x, ty), self.dims)

    def bind_dim(self, i: str) -> "Ctx":
        return Ctx(self.scope, self.dims | {i})

    def restrict(self, sigma: dict) -> "Ctx":
        return Ctx(self.scope.restrict(sigma), self.dims - sigma.keys())

    def has_var(self, x: str) -> bool:
        return self.scope.is_local(x) or x in self.scope.globals.types


class Checker:
    def __init__(self, globals_: Optional[Globals] = None):
        self.globals = globals_ or Globals({}, {})
        self.pos = (0, 0)
        self.face: Optional[str] = None

    def ctx(self, dims=()) -> Ctx:
        return Ctx(Scope(self.globals), frozenset(dims))

    # errors

    def error(self, kind: str, expected: str, actual: str, t: Optional[Term] = None):
        pos = (t.pos if t is not None and t.pos else None) or self.pos
        return TypeCheckError(kind, expected, actual, pos, self.face)

    def show(self, t: Term, ty: Optional[Term], ctx: Ctx) -> str:
        try:
            return pretty(readback(t, ty, ctx.scope) if ty is not None else nf_type(t, ctx.scope))
        except KernelError:
            return pretty(t)

    def conv(self, ty: Term, a: Term, b: Term, ctx: Ctx, t: Term) -> bool:
        try:
            return convert(ty, a, b, ctx.scope)
        except _EvalUniverseKan as e:
            raise self.error("UnsupportedUniverseKan", "a Kan type", str(e), t)

    def conv_type(self, a: Term, b: Term, ctx: Ctx, t: Term) -> bool:
        try:
            return convert_type(a, b, ctx.scope)
        except _EvalUniverseKan as e:
            raise self.error("UnsupportedUniverseKan", "a Kan type", str(e), t)

    def whnf(self, t: Term, ctx: Ctx, at: Term) -> Term:
        try:
            return whnf(t, ctx.scope)
        except _EvalUniverseKan as e:
            raise self.error("UnsupportedUniverseKan", "a Kan type", str(e), at)

    def under_face(self, c, fn):
        saved = self.face
        self.face = show_face(face_conj(dict(c)))
        try:
            return fn()
        finally:
            self.face = saved

    def track(self, t: Term):
        if t.pos:
            self.pos = t.pos

    # binders

    def var_binder(self, x: str, ctx: Ctx, avoid=frozenset()) -> str:
        return fresh(x) if ctx.has_var(x) or x in avoid else x

    def dim_binder(self, i: str, ctx: Ctx) -> str:
        return fresh(i) if i in ctx.dims else i

    def scope_dims(self, r, ctx: Ctx, t: Term) -> None:
        extra = dim_names(r) - ctx.dims
        if extra:
            raise self.error("ScopeError", "a bound dimension", ", ".join(sorted(extra)), t)

    def scope_face(self, phi: FaceFormula, ctx: Ctx, t: Term) -> None:
        extra = face_names(phi) - ctx.dims
        if extra:
            raise self.error("ScopeError", "a bound dimension", ", ".join(sorted(extra)), t)

    # types

    def check_type(self, t: Term, ctx: Ctx) -> Term:
        self.track(t)
        match t:
            case U():
                return t
            case Pi(x, a, b) | Sigma(x, a, b):
                a2 = self.check_type(a, ctx)
                y = self.var_binder(x, ctx)
                b2 = self.check_type(subst(b, {x: Var(y)}), ctx.bind(y, a2))
                return type(t)(y, a2, b2, pos=t.pos)
            case PathP(i, a, l, r):
                k = self.dim_binder(i, ctx)
                a2 = self.check_type(subst(a, None, {i: DName(k)}), ctx.bind_dim(k))
                l2 = self.check(l, subst(a2, None, {k: ZERO}), ctx)
                r2 = self.check(r, subst(a2, None, {k: ONE}), ctx)
                return PathP(k, a2, l2, r2, pos=t.pos)
        return self.check(t, U(), ctx)

    def check_params(self, d: HITDecl, ps, ctx: Ctx, t: Term) -> tuple:
        if len(ps) != len(d.params):
            raise self.error("Mismatch", f"{len(d.params)} parameters of {d.name}", str(len(ps)), t)
        ts, out = {}, []
        for (p, ty), v in zip(d.params, ps):
            v2 = self.check(v, subst(ty, ts), ctx)
            out.append(v2)
            ts[p] = v2
        return tuple(out)

    # checking

    def check(self, t: Term, ty: Term, ctx: Ctx) -> Term:
        self.track(t)
        a = self.whnf(ty, ctx, t)
        match t, a:
            case Lam(x, body), Pi(y, dom, cod):
                z = self.var_binder(x, ctx, free_vars(a))
                body2 = self.check(subst(body, {x: Var(z)}), subst(cod, {y: Var(z)}), ctx.bind(z, dom))
                return Lam(z, body2, pos=t.pos)
            case Lam(), _:
                raise self.error("Mismatch", self.show(a, None, ctx), "a function", t)
            case Pair(f, s), Sigma(y, fa, sb):
                f2 = self.check(f, fa, ctx)
                s2 = self.check(s, subst(sb, {y: f2}), ctx)
                return Pair(f2, s2, pos=t.pos)
            case PLam(i, body), PathP(j, b, l, r):
                k = self.dim_binder(i, ctx)
                line = subst(b, None, {j: DName(k)})
                body2 = self.check(subst(body, None, {i: DName(k)}), line, ctx.bind_dim(k))
                for end, side in ((ZERO, l), (ONE, r)):
                    got = subst(body2, None, {k: end})
                    at = subst(b, None, {j: end})
                    if not self.conv(at, got, side, ctx, t):
                        raise self.error(
                            "BoundaryMismatch",
                            self.show(side, at, ctx),
                            self.show(got, at, ctx),
                            t,
                        )
                return PLam(k, body2, pos=t.pos)
            case PLam(), _:
                raise self.error("Mismatch", self.show(a, None, ctx), "a path", t)
            case Con(_, None, con, _, _), HitType(h, ps) if con in BUILTINS[h].constructors_names():
                return self.check_con(t, BUILTINS[h], ps, ctx)
            case Con(None, _, con, _, _), _:
                raise self.error("Mismatch", self.show(a, None, ctx), f"constructor {con}", t)
        t2, got = self.infer(t, ctx)
        if not self.conv_type(got, a, ctx, t):
            raise self.error("Mismatch", self.show(a, None, ctx), self.show(got, None, ctx), t)
        return t2

    def check_con(self, t: Con, d: HITDecl, ps, ctx: Ctx) -> Term:
        c = d.con(t.con)
        if len(t.args) != len(c.args) or len(t.dims) != len(c.dims):
            raise self.error("Mismatch", f"{d.name}.{c.name} with arity {len(c.args)}+{len(c.dims)}", f"{len(t.args)}+{len(t.dims)}", t)
        args: list = []
        for a in t.args:
            tys = telescope_types(d, c, ps, tuple(args) + (a,))
            args.append(self.check(a, tys[len(args)], ctx))
        for r in t.dims:
            self.scope_dims(r, ctx, t)
        return Con(d.name, tuple(ps), c.name, tuple(args), t.dims, pos=t.pos)

    # inference

    def infer(self, t: Term, ctx: Ctx) -> tuple[Term, Term]:
        self.track(t)
        match t:
            case Var(x):
                if not ctx.has_var(x):
                    raise self.error("ScopeError", "a bound variable", x, t)
                return t, ctx.scope.type_of(x)
            case U():
                raise self.error("Mismatch", "a term with a type", "U (the universe has no type)", t)
            case Pi() | Sigma() | PathP():
                return self.check_type_in_u(t, ctx), U()
            case HitType(h, ps):
                return HitType(h, self.check_params(BUILTINS[h], ps, ctx, t), pos=t.pos), U()
            case App(Lam(x, body), arg):
                return self.infer(subst(body, {x: arg}), ctx)
            case App(f, arg):
                f2, fty = self.infer(f, ctx)
                fty = self.whnf(fty, ctx, t)
                if not isinstance(fty, Pi):
                    raise self.error("Mismatch", "a function type", self.show(fty, None, ctx), f)
                a2 = self.check(arg, fty.dom, ctx)
                return App(f2, a2, pos=t.pos), subst(fty.cod, {fty.name: a2})
            case Fst(p) | Snd(p):
                p2, pty = self.infer(p, ctx)
                pty = self.whnf(pty, ctx, t)
                if not isinstance(pty, Sigma):
                    raise self.error("Mismatch", "a pair type", self.show(pty, None, ctx), p)
                if isinstance(t, Fst):
                    return Fst(p2, pos=t.pos), pty.fst
                return Snd(p2, pos=t.pos), subst(pty.snd, {pty.name: Fst(p2)})
            case PApp(PLam(i, body), r):
                self.scope_dims(r, ctx, t)
                return self.infer(subst(body, None, {i: r}), ctx)
            case PLam(i, body):
                # the line is read off the body; endpoints are its faces
                k = self.dim_binder(i, ctx)
                body2, line = self.infer(subst(body, None, {i: DName(k)}), ctx.bind_dim(k))
                ends = (subst(body2, None, {k: ZERO}), subst(body2, None, {k: ONE}))
                return PLam(k, body2, pos=t.pos), PathP(k, line, *ends)
            case PApp(p, r):
                self.scope_dims(r, ctx, t)
                p2, pty = self.infer(p, ctx)
                pty = self.whnf(pty, ctx, t)
                if not isinstance(pty, PathP):
                    raise self.error("Mismatch", "a path type", self.show(pty, None, ctx), p)
                return PApp(p2, r, pos=t.pos), subst(pty.ty, None, {pty.dim: r})
            case Con(h, ps, con, _, _):
                d = BUILTINS[h or "S1"]
                if ps is None and d.params:
                    raise self.error("Mismatch", f"parameters for {con}", "none (write {con}{...})", t)
                ps2 = self.check_params(d, ps or (), ctx, t)
                return self.check_con(t, d, ps2, ctx), HitType(d.name, ps2)
            case HComp():
                return self.infer_hcomp(t, ctx)
            case Trans():
                return self.infer_trans(t, ctx)
            case Elim():
                return self.infer_elim(t, ctx)
        raise self.error("Mismatch", "an inferable term", pretty(t), t)

    def check_type_in_u(self, t: Term, ctx: Ctx) -> Term:
        match t:
            case Pi(x, a, b) | Sigma(x, a, b):
                a2 = self.check(a, U(), ctx)
                y = self.var_binder(x, ctx)
                b2 = self.check(subst(b, {x: Var(y)}), U(), ctx.bind(y, a2))
                return type(t)(y, a2, b2, pos=t.pos)
            case PathP(i, a, l, r):
                k = self.dim_binder(i, ctx)
                a2 = self.check(subst(a, None, {i: DName(k)}), U(), ctx.bind_dim(k))
                l2 = self.check(l, subst(a2, None, {k: ZERO}), ctx)
                r2 = self.check(r, subst(a2, None, {k: ONE}), ctx)
                return PathP(k, a2, l2, r2, pos=t.pos)
        raise AssertionError(t)

    def kan_type(self, a: Term, ctx: Ctx, t: Term) -> Term:
        a2 = self.check_type(a, ctx)
        if isinstance(self.whnf(a2, ctx, t), U):
            raise self.error("UnsupportedUniverseKan", "a Kan type", "U", t)
        return a2

    def infer_hcomp(self, t: HComp, ctx: Ctx) -> tuple[Term, Term]:
        a = self.kan_type(t.ty, ctx, t)
        u0 = self.check(t.base, a, ctx)
        k = self.dim_binder(t.dim, ctx)
        sys = tuple((phi, subst(u, None, {t.dim: DName(k)})) for phi, u in t.system)
        sys2 = self.check_system(ctx, k, sys, a, t)
        # each side must start at the base
        for phi, u in sys2:
            (c,) = phi.conjs
            sigma = conj_subst(c)
            inner = ctx.restrict(sigma)
            got = subst(u, None, {**sigma, k: ZERO})
            at, want = subst(a, None, sigma), subst(u0, None, sigma)
            if not self.conv(at, got, want, inner, t):
                self.face = show_face(phi)
                try:
                    raise self.error("BoundaryMismatch", self.show(want, at, inner), self.show(got, at, inner), t)
                finally:
                    self.face = None
        return HComp(k, a, sys2, u0, pos=t.pos), a

    def check_system(self, ctx: Ctx, i: str, sys, a: Term, t: Term) -> tuple:
        """Check each side under its face (with `i` bound) and pairwise agreement on overlaps.

        The elaborated system has one side per conjunction.
        """
        out, by_branch = [], []
        for phi, u in sys:
            self.scope_face(phi, ctx, t)
            pieces = []
            for c in phi.conjs:
                sigma = conj_subst(c)
                inner = ctx.restrict(sigma).bind_dim(i)
                u2 = self.under_face(c, lambda: self.check(subst(u, None, sigma), subst(a, None, sigma), inner))
                pieces.append((c, u2))
                out.append((face_conj(dict(c)), u2))
            by_branch.append((phi, u))
        for k, (phi, u) in enumerate(by_branch):
            for l in range(k + 1, len(by_branch)):
                psi, v = by_branch[l]
                for c in face_and(phi, psi).conjs:
                    sigma = conj_subst(c)
                    inner = ctx.restrict(sigma).bind_dim(i)
                    at = subst(a, None, sigma)
                    x, y = subst(u, None, sigma), subst(v, None, sigma)
                    if not self.conv(at, x, y, inner, t):
                        self.face = show_face(face_conj(dict(c)))
                        try:
                            raise self.error(
                                "SystemIncompatible",
                                f"side {k}: {self.show(x, at, inner)}",
                                f"side {l}: {self.show(y, at, inner)}",
                                t,
                            )
                        finally:
                            self.face = None
        return tuple(out)

    def check_constancy(self, ctx: Ctx, i: str, a: Term, phi: FaceFormula, t: Term) -> None:
        for c in phi.conjs:
            sigma = conj_subst(c)
            inner = ctx.restrict(sigma).bind_dim(i)
            line = subst(a, None, sigma)
            start = subst(line, None, {i: ZERO})
            if not self.conv_type(line, start, inner, t):
                self.face = show_face(face_conj(dict(c)))
                try:
                    raise self.error("ConstancyViolation", self.show(start, None, inner), self.show(line, None, inner), t)
                finally:
                    self.face = None

    def infer_trans(self, t: Trans, ctx: Ctx) -> tuple[Term, Term]:
        self.scope_face(t.face, ctx, t)
        k = self.dim_binder(t.dim, ctx)
        a = self.kan_type(subst(t.ty, None, {t.dim: DName(k)}), ctx.bind_dim(k), t)
        self.check_constancy(ctx, k, a, t.face, t)
        u0 = self.check(t.base, subst(a, None, {k: ZERO}), ctx)
        return Trans(k, a, t.face, u0, pos=t.pos), subst(a, None, {k: ONE})

    # eliminators

    def infer_elim(self, t: Elim, ctx: Ctx) -> tuple[Term, Term]:
        if t.hit_ty is not None:
            d_ty = self.check_type(t.hit_ty, ctx)
            s = self.check(t.scrut, d_ty, ctx)
        else:
            s, d_ty = self.infer(t.scrut, ctx)
        hty = self.whnf(d_ty, ctx, t)
        if not isinstance(hty, HitType):
            raise self.error("Mismatch", "a higher inductive type", self.show(hty, None, ctx), t.scrut)
        x = self.var_binder(t.var, ctx)
        motive = self.check_type(subst(t.motive, {t.var: Var(x)}), ctx.bind(x, hty))
        d = BUILTINS[hty.hit]
        branches = self.check_hit_elim_branches(ctx, d, hty.params, x, motive, t.branches, t)
        e = Elim(hty, x, motive, branches, s, pos=t.pos)
        return e, subst(motive, {x: s})

    def check_hit_elim_branches(self, ctx: Ctx, d: HITDecl, ps, x: str, motive: Term, branches, t: Elim) -> tuple:
        given = {}
        for br in branches:
            if br.con in given or br.con not in d.constructors_names():
                raise self.error("Mismatch", f"one branch per constructor of {d.name}", br.con, t)
            given[br.con] = br
        missing = [c.name for c in d.constructors if c.name not in given]
        if missing:
            raise self.error("Mismatch", f"a branch for {missing[0]}", "none", t)
        done: list[Branch] = []
        for c in d.constructors:
            done.append(self.check_branch(ctx, d, ps, x, motive, c, given[c.name], tuple(done), t))
        return tuple(done)

    def check_branch(self, ctx, d, ps, x, motive, c, br: Branch, done: tuple, t: Elim) -> Branch:
        nrec = sum(1 for _, ty in c.args if d.is_recursive_arg(ty))
        if (len(br.vars), len(br.rec_vars), len(br.dims)) != (len(c.args), nrec, len(c.dims)):
            raise self.error("Mismatch", f"branch binders for {c.name}", " ".join(br.vars + br.rec_vars + br.dims), t)
        inner = ctx
        ts, vs, rvs = {}, [], []
        rec = iter(br.rec_vars)
        for v, (_, decl_ty) in zip(br.vars, c.args):
            v2 = self.var_binder(v, inner)
            ty = telescope_types(d, c, ps, tuple(Var(y) for y in vs) + (Var(v2),))[len(vs)]
            inner = inner.bind(v2, ty)
            ts[v] = Var(v2)
            vs.append(v2)
            if d.is_recursive_arg(decl_ty):
                r = next(rec)
                r2 = self.var_binder(r, inner)
                inner = inner.bind(r2, subst(motive, {x: Var(v2)}))
                ts[r] = Var(r2)
                rvs.append(r2)
        ds = []
        for i in br.dims:
            k = self.dim_binder(i, inner)
            inner = inner.bind_dim(k)
            ds.append(k)
        dsub = {i: DName(k) for i, k in zip(br.dims, ds)}
        point = Con(d.name, tuple(ps), c.name, tuple(Var(v) for v in vs), tuple(DName(k) for k in ds))
        target = subst(motive, {x: point})
        body = self.check(subst(br.body, ts, dsub), target, inner)
        new = Branch(c.name, tuple(vs), tuple(rvs), tuple(ds), body)
        # boundary obligations against the image of each boundary term
        partial = Elim(HitType(d.name, tuple(ps)), x, motive, done + (new,), point)
        rec_of = dict(zip([v for v, (_, ty) in zip(vs, c.args) if d.is_recursive_arg(ty)], rvs))
        pmap = {p: v for (p, _), v in zip(d.params, ps)}
        amap = {a: Var(v) for (a, _), v in zip(c.args, vs)}
        bmap = {i: DName(k) for i, k in zip(c.dims, ds)}
        for phi, e in c.boundary:
            e_inst = subst(e, {**pmap, **amap}, bmap)
            image = elim_image(partial, e_inst, rec_of)
            for cj in face_subst(phi, bmap).conjs:
                sigma = conj_subst(cj)
                rctx = inner.restrict(sigma)
                at = subst(target, None, sigma)
                got, want = subst(body, None, sigma), subst(image, None, sigma)
                if not self.conv(at, got, want, rctx, br.body):
                    self.face = show_face(face_conj(dict(cj)))
                    try:
                        raise self.error("BoundaryMismatch", self.show(want, at, rctx), self.show(got, at, rctx), t)
                    finally:
                        self.face = None
        return new

    # modules

    def check_definition(self, name: str, ty: Optional[Term], body: Optional[Term]) -> tuple[Term, Optional[Term]]:
        ctx = self.ctx()
        if body is None:
            ty2 = self.check_type(ty, ctx)
            self.globals.types[name] = ty2
            self.globals.defs[name] = None
            return ty2, None
        if ty is not None:
            ty2 = self.check_type(ty, ctx)
            body2 = self.check(body, ty2, ctx)
        else:
            body2, ty2 = self.infer(body, ctx)
        self.globals.types[name] = ty2
        self.globals.defs[name] = body2
        return ty2, body2


def elim_image(partial: Elim, e: Term, rec_of: dict) -> Term:
    """What the eliminator must return on a boundary term, built from earlier branches."""
    match e:
        case Var(v) if v in rec_of:
            return Var(rec_of[v])
        case HComp(k, a, sys, u0):
            j = fresh(k)
            sys = tuple((phi, subst(u, None, {k: DName(j)})) for phi, u in sys)
            v = hfill(j, a, sys, u0)
            motive = subst(partial.motive, {partial.var: v})
            return comp(
                j,
                motive,
                tuple((phi, elim_image(partial, u, rec_of)) for phi, u in sys),
                elim_image(partial, u0, rec_of),
            )
        case Con(h, _, con, args, dims):
            for br in partial.branches:
                if br.con == con:
                    d = BUILTINS[h]
                    c = d.con(con)
                    ts = dict(zip(br.vars, args))
                    rec = iter(br.rec_vars)
                    for a, (_, ty) in zip(args, c.args):
                        if d.is_recursive_arg(ty):
                            ts[next(rec)] = elim_image(partial, a, rec_of)
                    return subst(br.body, ts, dict(zip(br.dims, dims)))
    return Elim(partial.hit_ty, partial.var, partial.motive, partial.branches, e)


def check_module(mod: SourceModule, globals_: Optional[Globals] = None) -> Checker:
    """Typecheck every definition in order; raises TypeCheckError at the first failure."""
    for d in BUILTINS.values():
        try:
            hit_validate(d)
        except SchemaViolation as e:
            raise TypeCheckError("SchemaViolation", "a valid declaration", str(e), (0, 0))
    ck = Checker(globals_)
    for d in mod.defs:
        ck.pos = d.pos
        ck.check_definition(d.name, d.type, d.body)
    return ck


def validate_decl(d: HITDecl) -> list[str]:
    """Schema validation surfaced as a typing error."""
    try:
        return hit_validate(d)
    except SchemaViolation as e:
        raise TypeCheckError("SchemaViolation", "a declaration following the constructor schema", e.clause, (0, 0), None)
