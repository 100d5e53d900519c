"""Random well-typed terms, faces and dimension substitutions for property suites.

Terms are built type-directed over a fixed menu of HIT types, so they are
well-typed by construction: hcomp sides all reuse one filler line, and
transport lines are constant on the chosen face.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from typing import Optional

from .dimalg import (
    FACE_BOT,
    FACE_TOP,
    DJoin,
    DMeet,
    DName,
    DNeg,
    DimExpr,
    FaceFormula,
    ONE,
    ZERO,
    face_and,
    face_eq_dim,
    face_or,
    join,
    meet,
    neg,
)
from .eval import Globals, Scope
from .syntax import (
    Branch,
    Con,
    Elim,
    HComp,
    HitType,
    Lam,
    PApp,
    PathP,
    PLam,
    Term,
    Trans,
    Var,
    subst,
)

DIM_POOL = ("i", "j", "k")


def seed_from_env(default: int = 20180712) -> int:
    return int(os.environ.get("KERNEL_SEED", default))


# --------------------------------------------------------------------------
# the type menu

S1 = HitType("S1")
S2 = HitType("S2")
TOR = HitType("T")
TORF = HitType("TF")
SUSP = HitType("Susp", (S1,))
TRUNC = HitType("Trunc", (S1,))
LEG_ID = Lam("c", Var("c"))
LEG_BASE = Lam("c", Con("S1", (), "base"))


def pushout(u: Term, v: Term) -> HitType:
    return HitType("Pushout", (S1, S1, S1, u, v))


PO = pushout(LEG_ID, LEG_BASE)
PO2 = pushout(LEG_ID, LEG_ID)


def path_line(r: DimExpr) -> Term:
    """Path S1 base (loop r)."""
    return PathP("_", S1, base(), Con("S1", (), "loop", (), (r,)))


def susp_line(r: DimExpr) -> HitType:
    """Susp (Path S1 base (loop r)); constant wherever r = 0."""
    return HitType("Susp", (path_line(r),))


def base() -> Con:
    return Con("S1", (), "base")


def con(ty: HitType, name: str, args=(), dims=()) -> Con:
    return Con(ty.hit, ty.params, name, tuple(args), tuple(dims))


# --------------------------------------------------------------------------
# eliminator library (each well-typed)


def elim(ty: HitType, motive: Term, branches, scrut: Term, var: str = "x") -> Elim:
    return Elim(ty, var, motive, tuple(branches), scrut)


def _b(c, body, vars=(), rec=(), dims=()):
    return Branch(c, tuple(vars), tuple(rec), tuple(dims), body)


def elim_s1_flip(s):
    return elim(S1, S1, [_b("base", base()), _b("loop", con(S1, "loop", (), (neg(DName("i")),)), dims=("i",))], s)


def elim_s1_const(s):
    return elim(S1, S1, [_b("base", base()), _b("loop", base(), dims=("i",))], s)


def elim_s1_refl(s):
    """elim into Path S1 x x: a dependent motive."""
    i = DName("i")
    motive = PathP("_", S1, Var("x"), Var("x"))
    return elim(
        S1,
        motive,
        [_b("base", PLam("l", base())), _b("loop", PLam("l", con(S1, "loop", (), (i,))), dims=("i",))],
        s,
    )


def elim_susp_s1(s):
    return elim(
        SUSP,
        S1,
        [_b("N", base()), _b("S", base()), _b("merid", con(S1, "loop", (), (DName("i"),)), vars=("a",), dims=("i",))],
        s,
    )


def elim_susp_id(s):
    i = DName("i")
    return elim(
        SUSP,
        SUSP,
        [_b("N", con(SUSP, "N")), _b("S", con(SUSP, "S")), _b("merid", con(SUSP, "merid", (Var("a"),), (i,)), vars=("a",), dims=("i",))],
        s,
    )


def elim_torus_s1(s):
    i, j = DName("i"), DName("j")
    return elim(
        TOR,
        S1,
        [
            _b("b", base()),
            _b("tp", con(S1, "loop", (), (i,)), dims=("i",)),
            _b("tq", base(), dims=("i",)),
            _b("surf", con(S1, "loop", (), (j,)), dims=("i", "j")),
        ],
        s,
    )


def elim_torus_swap(s):
    i, j = DName("i"), DName("j")
    return elim(
        TOR,
        TOR,
        [
            _b("b", con(TOR, "b")),
            _b("tp", con(TOR, "tq", (), (i,)), dims=("i",)),
            _b("tq", con(TOR, "tp", (), (i,)), dims=("i",)),
            _b("surf", con(TOR, "surf", (), (j, i)), dims=("i", "j")),
        ],
        s,
    )


def elim_torusf_id(s):
    i, j = DName("i"), DName("j")
    return elim(
        TORF,
        TORF,
        [
            _b("bF", con(TORF, "bF")),
            _b("tpF", con(TORF, "tpF", (), (i,)), dims=("i",)),
            _b("tqF", con(TORF, "tqF", (), (i,)), dims=("i",)),
            _b("surfF", con(TORF, "surfF", (), (i, j)), dims=("i", "j")),
        ],
        s,
    )


def elim_s2_swap(s):
    i, j = DName("i"), DName("j")
    return elim(S2, S2, [_b("base", con(S2, "base")), _b("loop", con(S2, "loop", (), (j, i)), dims=("i", "j"))], s)


def elim_trunc_id(s):
    return elim(
        TRUNC,
        TRUNC,
        [
            _b("inc", con(TRUNC, "inc", (Var("a"),)), vars=("a",)),
            _b("sq", con(TRUNC, "sq", (Var("fv"), Var("fw")), (DName("i"),)), vars=("v", "w"), rec=("fv", "fw"), dims=("i",)),
        ],
        s,
    )


def elim_po2_s1(s):
    return elim(
        PO2,
        S1,
        [_b("inl", Var("a"), vars=("a",)), _b("inr", Var("b"), vars=("b",)), _b("push", Var("c"), vars=("c",), dims=("i",))],
        s,
    )


def elim_po_id(ty: HitType):
    def go(s):
        return elim(
            ty,
            ty,
            [
                _b("inl", con(ty, "inl", (Var("a"),)), vars=("a",)),
                _b("inr", con(ty, "inr", (Var("b"),)), vars=("b",)),
                _b("push", con(ty, "push", (Var("c"),), (DName("i"),)), vars=("c",), dims=("i",)),
            ],
            s,
        )

    return go


# --------------------------------------------------------------------------
# generators


@dataclass
class Gen:
    rng: random.Random
    allow_vars: bool = True
    kinds: tuple = ("S1", "S2", "T", "TF", "Susp", "Trunc", "PO", "PO2", "PL")
    counter: int = field(default=0)

    @classmethod
    def seeded(cls, seed: Optional[int] = None, **kw) -> "Gen":
        return cls(random.Random(seed_from_env() if seed is None else seed), **kw)

    def binder(self, base: str = "m") -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    # interval and faces

    def dim(self, dims, depth: int = 2) -> DimExpr:
        dims = sorted(dims)
        roll = self.rng.random()
        if not dims or roll < 0.12:
            return self.rng.choice((ZERO, ONE))
        if depth <= 0 or roll < 0.55:
            return DName(self.rng.choice(dims))
        if roll < 0.7:
            return neg(self.dim(dims, depth - 1))
        op = meet if roll < 0.85 else join
        return op(self.dim(dims, depth - 1), self.dim(dims, depth - 1))

    def face(self, dims, allow_top: bool = False) -> FaceFormula:
        dims = sorted(dims)
        if not dims:
            return FACE_TOP if allow_top and self.rng.random() < 0.3 else FACE_BOT
        roll = self.rng.random()
        if allow_top and roll < 0.08:
            return FACE_TOP
        if roll < 0.15:
            return FACE_BOT
        atom = lambda: face_eq_dim(DName(self.rng.choice(dims)), self.rng.randint(0, 1))  # noqa: E731
        phi = atom()
        if roll > 0.6:
            phi = face_and(phi, atom())
        if roll > 0.8:
            phi = face_or(phi, atom())
        return phi

    def dim_subst(self, names) -> dict:
        """A random substitution: faces, diagonals, connections, reversals."""
        out = {}
        pool = list(DIM_POOL)
        for x in sorted(names):
            roll = self.rng.random()
            y, z = DName(self.rng.choice(pool)), DName(self.rng.choice(pool))
            if roll < 0.2:
                out[x] = self.rng.choice((ZERO, ONE))
            elif roll < 0.45:
                out[x] = y
            elif roll < 0.6:
                out[x] = neg(y)
            elif roll < 0.8:
                out[x] = meet(y, z)
            else:
                out[x] = join(y, z)
        return out

    # types

    def hit_type(self, dims) -> tuple[str, HitType]:
        kind = self.rng.choice(self.kinds)
        return kind, self.type_of(kind, dims)

    def type_of(self, kind: str, dims) -> HitType:
        match kind:
            case "S1":
                return S1
            case "S2":
                return S2
            case "T":
                return TOR
            case "TF":
                return TORF
            case "Susp":
                return SUSP
            case "Trunc":
                return TRUNC
            case "PO":
                return PO
            case "PO2":
                return PO2
            case "PL":
                return susp_line(self.dim(dims, 1))
        raise ValueError(kind)

    # terms

    def term(self, ty: HitType, depth: int, dims) -> Term:
        dims = frozenset(dims)
        if depth <= 0 or self.rng.random() < 0.25:
            return self.leaf(ty, depth, dims)
        roll = self.rng.random()
        if roll < 0.3:
            return self.hcomp(ty, depth, dims)
        if roll < 0.5:
            return self.trans(ty, depth, dims)
        if roll < 0.75:
            e = self.eliminate(ty, depth, dims)
            if e is not None:
                return e
        return self.leaf(ty, depth, dims)

    def point(self, ty: HitType) -> Term:
        """A constructor with no recursive arguments, for exhausted depth."""
        match ty.hit:
            case "S1" | "S2":
                return con(ty, "base")
            case "T":
                return con(ty, "b")
            case "TF":
                return con(ty, "bF")
            case "Susp":
                return con(ty, self.rng.choice(("N", "S")))
            case "Trunc":
                return con(ty, "inc", (base(),))
            case "Pushout":
                return con(ty, self.rng.choice(("inl", "inr")), (base(),))
        raise ValueError(ty)

    def leaf(self, ty: HitType, depth: int, dims) -> Term:
        if depth < 0:
            return self.point(ty)
        r = lambda: self.dim(dims)  # noqa: E731
        sub = lambda t: self.term(t, depth - 1, dims)  # noqa: E731
        match ty.hit:
            case "S1":
                if self.allow_vars and self.rng.random() < 0.15:
                    return Var("x")
                return self.rng.choice([base, lambda: con(S1, "loop", (), (r(),))])()
            case "S2":
                return self.rng.choice([lambda: con(S2, "base"), lambda: con(S2, "loop", (), (r(), r()))])()
            case "T":
                return self.rng.choice(
                    [
                        lambda: con(TOR, "b"),
                        lambda: con(TOR, "tp", (), (r(),)),
                        lambda: con(TOR, "tq", (), (r(),)),
                        lambda: con(TOR, "surf", (), (r(), r())),
                    ]
                )()
            case "TF":
                return self.rng.choice(
                    [
                        lambda: con(TORF, "bF"),
                        lambda: con(TORF, "tpF", (), (r(),)),
                        lambda: con(TORF, "tqF", (), (r(),)),
                        lambda: con(TORF, "surfF", (), (r(), r())),
                    ]
                )()
            case "Susp":
                if ty.params[0] == S1:
                    return self.rng.choice(
                        [lambda: con(ty, "N"), lambda: con(ty, "S"), lambda: con(ty, "merid", (sub(S1),), (r(),))]
                    )()
                return self.rng.choice(
                    [lambda: con(ty, "N"), lambda: con(ty, "S"), lambda: con(ty, "merid", (self.path(ty.params[0], dims),), (r(),))]
                )()
            case "Trunc":
                return self.rng.choice(
                    [lambda: con(ty, "inc", (sub(S1),)), lambda: con(ty, "sq", (sub(ty), sub(ty)), (r(),))]
                )()
            case "Pushout":
                return self.rng.choice(
                    [
                        lambda: con(ty, "inl", (sub(S1),)),
                        lambda: con(ty, "inr", (sub(S1),)),
                        lambda: con(ty, "push", (sub(S1),), (r(),)),
                    ]
                )()
        raise ValueError(ty)

    def path(self, pty: PathP, dims) -> Term:
        """An element of Path S1 base (loop r)."""
        r = pty.right.dims[0]
        l = self.binder("l")
        if self.rng.random() < 0.6:
            return PLam(l, con(S1, "loop", (), (meet(DName(l), r),)))
        m = self.binder("m")
        side = ((face_eq_dim(DName(l), 0), base()), (face_eq_dim(DName(l), 1), con(S1, "loop", (), (meet(r, DName(m)),))))
        return PLam(l, HComp(m, S1, side, base()))

    def hcomp(self, ty: HitType, depth: int, dims) -> Term:
        m = self.binder("m")
        w = self.term(ty, depth - 1, dims | {m})
        faces = [self.face(dims) for _ in range(self.rng.randint(1, 2))]
        return HComp(m, ty, tuple((phi, w) for phi in faces), subst(w, None, {m: ZERO}))

    def trans(self, ty: HitType, depth: int, dims) -> Term:
        m = self.binder("m")
        if ty.hit == "Susp" and isinstance(ty.params[0], PathP):
            r = ty.params[0].right.dims[0]
            line = susp_line(meet(DName(m), r))
            phi = FACE_BOT if self.rng.random() < 0.4 else face_and(face_eq_dim(r, 0), self.face(dims))
            start = susp_line(ZERO)
            return Trans(m, line, phi, self.term(start, depth - 1, dims))
        return Trans(m, ty, self.face(dims), self.term(ty, depth - 1, dims))

    def eliminate(self, ty: HitType, depth: int, dims) -> Optional[Term]:
        sub = lambda t: self.term(t, depth - 1, dims)  # noqa: E731
        options = {
            "S1": [
                lambda: elim_s1_flip(sub(S1)),
                lambda: elim_s1_const(sub(S1)),
                lambda: elim_susp_s1(sub(SUSP)),
                lambda: elim_torus_s1(sub(TOR)),
                lambda: elim_po2_s1(sub(PO2)),
                lambda: PApp(elim_s1_refl(sub(S1)), self.dim(dims)),
            ],
            "S2": [lambda: elim_s2_swap(sub(S2))],
            "T": [lambda: elim_torus_swap(sub(TOR))],
            "TF": [lambda: elim_torusf_id(sub(TORF))],
            "Trunc": [lambda: elim_trunc_id(sub(TRUNC))],
        }
        if ty == SUSP:
            options["Susp"] = [lambda: elim_susp_id(sub(SUSP))]
        if ty in (PO, PO2):
            options["Pushout"] = [lambda: elim_po_id(ty)(sub(ty))]
        fs = options.get(ty.hit)
        if not fs:
            return None
        return self.rng.choice(fs)()

    # instances for the property suites

    def typed_term(self, depth: int = 4, ndims: int = 3, kinds=None) -> tuple[Term, HitType, frozenset]:
        dims = frozenset(DIM_POOL[:ndims])
        kind = self.rng.choice(kinds or self.kinds)
        ty = self.type_of(kind, dims)
        return self.term(ty, depth, dims), ty, dims


def scope_with_vars() -> Scope:
    """The scope generated terms live in: one neutral point of the circle."""
    return Scope(Globals({}, {})).bind("x", S1)


def comp_instance(g: Gen, depth: int = 2):
    """A heterogeneous composition problem (line, face, side, base) over i."""
    i = "i"
    dims = frozenset({"i", "j"})
    choice = g.rng.randrange(4)
    if choice == 0:
        key = lambda r: susp_line(meet(r, DName("j")))  # noqa: E731
    elif choice == 1:
        key = lambda r: susp_line(r)  # noqa: E731
    elif choice == 2:
        key = lambda r: S1  # noqa: E731
    else:
        key = lambda r: SUSP  # noqa: E731
    line = key(DName(i))
    w = g.term(line, depth, dims)
    phi = FACE_TOP if g.rng.random() < 0.2 else g.face({"j"})
    if phi.is_bot:
        phi = face_eq_dim(DName("j"), g.rng.randint(0, 1))
    return i, line, phi, w, subst(w, None, {i: ZERO})


def pushout_trans_instance(g: Gen, depth: int = 2):
    """trans along a pushout line of path types, constant on the face."""
    i = "i"
    j = DName("j")
    c_line = path_line(meet(DName(i), j))
    legs = [
        Lam("c", Var("c")),
        Lam("c", PLam("l", con(S1, "loop", (), (meet(DName("l"), meet(DName(i), j)),)))),
    ]
    u, v = g.rng.choice(legs), g.rng.choice(legs)
    line = HitType("Pushout", (c_line, c_line, c_line, u, v))
    phi = FACE_BOT if g.rng.random() < 0.3 else face_and(face_eq_dim(j, 0), g.face({"k"}))
    start = subst(line, None, {i: ZERO})
    pty = subst(c_line, None, {i: ZERO})
    c = g.path(PathP("_", S1, base(), con(S1, "loop", (), (ZERO,))), {"j", "k"}) if g.rng.random() < 0.5 else PLam("l", base())
    r = g.dim({"j", "k"})
    which = g.rng.randrange(3)
    if which == 0:
        u0 = con(start, "inl", (c,))
    elif which == 1:
        u0 = con(start, "inr", (c,))
    else:
        u0 = con(start, "push", (c,), (r,))
    return i, line, phi, u0, pty


# --------------------------------------------------------------------------
# raw interval terms and faces, kept unsimplified


def raw_dim(rng: random.Random, names, depth: int = 4) -> DimExpr:
    roll = rng.random()
    if depth <= 0 or roll < 0.25:
        pick = rng.random()
        if pick < 0.1:
            return ZERO
        if pick < 0.2:
            return ONE
        return DName(rng.choice(names))
    if roll < 0.45:
        return DNeg(raw_dim(rng, names, depth - 1))
    kind = DMeet if roll < 0.72 else DJoin
    return kind(raw_dim(rng, names, depth - 1), raw_dim(rng, names, depth - 1))


def dim_variant(rng: random.Random, r: DimExpr, names, steps: int = 3) -> DimExpr:
    """Apply random De Morgan algebra laws at the root, yielding an equal term."""
    for _ in range(steps):
        x = raw_dim(rng, names, 1)
        match rng.randrange(8):
            case 0:
                r = DNeg(DNeg(r))
            case 1:
                r = DJoin(r, DMeet(r, x))  # absorption
            case 2:
                r = DMeet(r, DJoin(r, x))
            case 3:
                r = DMeet(ONE, r) if rng.random() < 0.5 else DJoin(r, ZERO)
            case 4:
                match r:
                    case DMeet(a, b) | DJoin(a, b):
                        r = type(r)(b, a)
                    case DNeg(DMeet(a, b)):
                        r = DJoin(DNeg(a), DNeg(b))
                    case DNeg(DJoin(a, b)):
                        r = DMeet(DNeg(a), DNeg(b))
            case 5:
                match r:
                    case DMeet(a, DJoin(b, c)):
                        r = DJoin(DMeet(a, b), DMeet(a, c))
                    case _:
                        r = DMeet(r, r)
            case 6:
                r = DNeg(DMeet(DNeg(r), DNeg(r)))  # -(-r /\ -r) = r
            case 7:
                r = DJoin(r, r)
    return r


def raw_face(rng: random.Random, names, depth: int = 3):
    from .dimalg import FAnd, FAtom, FConst, FOr

    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        if rng.random() < 0.08:
            return FConst(rng.random() < 0.5)
        return FAtom(raw_dim(rng, names, 2), rng.randint(0, 1))
    kind = FAnd if roll < 0.65 else FOr
    return kind(raw_face(rng, names, depth - 1), raw_face(rng, names, depth - 1))


def face_variant(rng: random.Random, phi, names):
    """Rebuild phi with lattice laws that hold in the face lattice."""
    from .dimalg import FAnd, FAtom, FConst, FOr

    match rng.randrange(6):
        case 0:
            return FAnd(phi, FConst(True))
        case 1:
            return FOr(phi, FAnd(phi, raw_face(rng, names, 1)))
        case 2:
            match phi:
                case FAnd(a, b) | FOr(a, b):
                    return type(phi)(b, a)
        case 3:
            match phi:
                case FAtom(r, bit):
                    return FAtom(dim_variant(rng, r, names), bit)
        case 4:
            match phi:
                case FAtom(DName(n), bit):
                    # (i=b) = (i=b) \/ ((i=0) /\ (i=1))
                    return FOr(phi, FAnd(FAtom(DName(n), 0), FAtom(DName(n), 1)))
        case 5:
            return FOr(phi, FConst(False))
    return phi


def param_trans_instance(g: Gen, hit: str):
    """trans along Susp or Trunc of a line of path types, on a constructor input."""
    i = "i"
    j = DName("j")
    line = HitType(hit, (path_line(meet(DName(i), j)),))
    start = HitType(hit, (path_line(ZERO),))
    phi = FACE_BOT if g.rng.random() < 0.3 else face_and(face_eq_dim(j, 0), g.face({"k"}))
    pty = path_line(ZERO)
    point = lambda: g.path(pty, {"j", "k"})  # noqa: E731
    r = g.dim({"j", "k"})
    if hit == "Susp":
        u0 = g.rng.choice([lambda: con(start, "N"), lambda: con(start, "S"), lambda: con(start, "merid", (point(),), (r,))])()
    else:
        inc = lambda: con(start, "inc", (point(),))  # noqa: E731
        leaf = lambda: inc() if g.rng.random() < 0.6 else con(start, "sq", (inc(), inc()), (g.dim({"j", "k"}),))  # noqa: E731
        u0 = inc() if g.rng.random() < 0.3 else con(start, "sq", (leaf(), leaf()), (r,))
    return i, line, phi, u0
