"""Well-founded trees over finite name sets with restriction maps.

An independent semantic model for S1, suspension and pushout elements: trees
carry interval leaves, hcomp nodes carry a family indexed by cube maps. The
evaluator's closed normal forms are interpreted as trees and stability under
substitution is compared against tree restriction.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .dimalg import (
    DName,
    DimExpr,
    FaceFormula,
    ONE,
    _mk_face,
    ZERO,
    dim_canon,
    dim_eq,
    dim_names,
    dim_subst,
    face_conj,
    face_subst,
    join,
    meet,
    neg,
)
from .eval import Scope, readback
from .syntax import Con, HComp, HitType, Lam, Term, Var, subst


# --------------------------------------------------------------------------
# cube maps


@dataclass(frozen=True)
class CubeMap:
    """f : J -> I, given by the image in dM(J) of every symbol of I."""

    dom: tuple
    images: tuple  # ((symbol of I, DimExpr over J), ...)

    @property
    def cod(self) -> tuple:
        return tuple(x for x, _ in self.images)

    @property
    def mapping(self) -> dict:
        return dict(self.images)

    def compose(self, g: "CubeMap") -> "CubeMap":
        """self . g : K -> I for g : K -> J."""
        gm = g.mapping
        return CubeMap(g.dom, tuple((x, dim_canon(dim_subst(r, gm))) for x, r in self.images))

    def __str__(self) -> str:
        from .dimalg import show_dim

        body = ", ".join(f"{x}:={show_dim(r)}" for x, r in self.images)
        return f"[{body}] : {{{', '.join(self.dom)}}}"


def identity(names: Iterable[str]) -> CubeMap:
    ns = tuple(sorted(names))
    return CubeMap(ns, tuple((x, DName(x)) for x in ns))


def cube_map(dom: Iterable[str], images: dict) -> CubeMap:
    return CubeMap(tuple(sorted(dom)), tuple(sorted((x, dim_canon(r)) for x, r in images.items())))


def _fresh_symbol(names: Iterable[str], base: str = "z") -> str:
    used = set(names)
    for k in itertools.count():
        s = f"{base}{k}"
        if s not in used:
            return s
    raise AssertionError


def probe_maps(names: Iterable[str]) -> tuple[CubeMap, ...]:
    """Faces, degeneracies, diagonals, connections and reversals into at most |I|+1 names."""
    return _probe_maps(tuple(sorted(names)))


@functools.lru_cache(maxsize=None)
def _probe_maps(ns: tuple) -> tuple[CubeMap, ...]:
    z = _fresh_symbol(ns)
    wide = ns + (z,)
    out = [identity(ns), CubeMap(tuple(sorted(wide)), identity(ns).images)]
    for x in ns:
        z_ = DName(z)
        x_ = DName(x)
        choices = [ZERO, ONE, neg(x_), z_, meet(x_, z_), join(x_, z_)]
        choices += [DName(y) for y in ns if y != x]
        for r in choices:
            images = {y: (r if y == x else DName(y)) for y in ns}
            dom = {y for y in ns if y != x} | dim_names(r) | (set(ns) if x in dim_names(r) else set())
            out.append(cube_map(dom, images))
            if r in (ZERO, ONE):
                # the same face, seen from a wider cube
                out.append(cube_map(dom | {z}, images))
    for bits in itertools.product((ZERO, ONE), repeat=len(ns)):
        if ns:
            out.append(cube_map((), dict(zip(ns, bits))))
    seen, uniq = set(), []
    for f in out:
        if f not in seen:
            seen.add(f)
            uniq.append(f)
    return tuple(uniq)


# --------------------------------------------------------------------------
# trees


class Tree:
    pass


@dataclass(frozen=True)
class TBase(Tree):
    pass


@dataclass(frozen=True)
class TLoop(Tree):
    r: DimExpr


@dataclass(frozen=True)
class TN(Tree):
    pass


@dataclass(frozen=True)
class TS(Tree):
    pass


@dataclass(frozen=True)
class TMerid(Tree):
    a: Tree
    r: DimExpr


@dataclass(frozen=True)
class TInl(Tree):
    a: Tree


@dataclass(frozen=True)
class TInr(Tree):
    b: Tree


@dataclass(frozen=True)
class TPush(Tree):
    c: Tree
    r: DimExpr


@dataclass(frozen=True)
class Leg:
    """A pushout leg C -> A acting on trees; must commute with restriction."""

    name: str
    fn: Callable[[Tree], Tree] = field(compare=False)

    def __call__(self, t: Tree) -> Tree:
        return self.fn(t)


LEG_ID = Leg("id", lambda t: t)
LEG_BASE = Leg("const base", lambda t: TBase())


@dataclass(frozen=True, eq=False)
class THComp(Tree):
    """hcomp [phi -> u] u0 with phi != 1; family(f, r) gives u_{f,r} for f with phi f = 1."""

    phi: FaceFormula
    family: Callable[[CubeMap, DimExpr], Tree]
    u0: Tree
    height: int
    legs: tuple = ()  # pushout legs (u, v), carried for restriction of push


def tree_height(t: Tree) -> int:
    match t:
        case THComp(height=h):
            return h
        case TMerid(a, _) | TInl(a) | TInr(a) | TPush(a, _):
            return tree_height(a)
    return 0


def tree_restrict(t: Tree, f: CubeMap, legs: tuple = ()) -> Tree:
    """u f for f : J -> I; constructor faces collapse to their boundary."""
    m = f.mapping
    match t:
        case TBase() | TN() | TS():
            return t
        case TLoop(r):
            rf = dim_canon(dim_subst(r, m))
            return TBase() if rf in (ZERO, ONE) else TLoop(rf)
        case TMerid(a, r):
            rf = dim_canon(dim_subst(r, m))
            if rf == ZERO:
                return TN()
            if rf == ONE:
                return TS()
            return TMerid(tree_restrict(a, f, legs), rf)
        case TInl(a):
            return TInl(tree_restrict(a, f, legs))
        case TInr(b):
            return TInr(tree_restrict(b, f, legs))
        case TPush(c, r):
            rf = dim_canon(dim_subst(r, m))
            cf = tree_restrict(c, f, legs)
            if rf == ZERO:
                return TInl(legs[0](cf))
            if rf == ONE:
                return TInr(legs[1](cf))
            return TPush(cf, rf)
        case THComp(phi, fam, u0, h, lg):
            pf = face_subst(phi, m)
            if pf.is_top:
                return fam(f, ONE)
            return THComp(pf, lambda g, r: fam(f.compose(g), r), tree_restrict(u0, f, lg or legs), h, lg or legs)
    raise TypeError(t)


# --------------------------------------------------------------------------
# probe equality


def tree_eq_probe(u: Tree, v: Tree, names: Iterable[str], depth: int = 2, extra=()) -> bool:
    """Structural equality; hcomp families are compared pointwise on the probe maps."""
    ns = tuple(sorted(names))
    match u, v:
        case (TBase(), TBase()) | (TN(), TN()) | (TS(), TS()):
            return True
        case TLoop(r), TLoop(s):
            return dim_eq(r, s)
        case TMerid(a, r), TMerid(b, s):
            return dim_eq(r, s) and tree_eq_probe(a, b, ns, depth)
        case (TInl(a), TInl(b)) | (TInr(a), TInr(b)):
            return tree_eq_probe(a, b, ns, depth)
        case TPush(a, r), TPush(b, s):
            return dim_eq(r, s) and tree_eq_probe(a, b, ns, depth)
        case THComp(p, fu, u0, _, _), THComp(q, fv, v0, _, _):
            if p != q or not tree_eq_probe(u0, v0, ns, depth):
                return False
            if depth <= 0:
                return True
            for g in list(probe_maps(ns)) + list(extra):
                if not face_subst(p, g.mapping).is_top:
                    continue
                rho = _fresh_symbol(g.dom, "r")
                wide = CubeMap(tuple(sorted(g.dom + (rho,))), g.images)
                for r in (ZERO, ONE, DName(rho)):
                    gg = wide if r not in (ZERO, ONE) else g
                    if not tree_eq_probe(fu(gg, r), fv(gg, r), gg.dom, depth - 1):
                        return False
            return True
    return False


def show_tree(t: Tree) -> str:
    from .dimalg import show_dim, show_face

    match t:
        case TBase():
            return "base"
        case TN():
            return "N"
        case TS():
            return "S"
        case TLoop(r):
            return f"loop {show_dim(r, 3)}"
        case TMerid(a, r):
            return f"merid ({show_tree(a)}) {show_dim(r, 3)}"
        case TInl(a):
            return f"inl ({show_tree(a)})"
        case TInr(b):
            return f"inr ({show_tree(b)})"
        case TPush(c, r):
            return f"push ({show_tree(c)}) {show_dim(r, 3)}"
        case THComp(phi, _, u0, h, _):
            return f"hcomp[{show_face(phi)} -> ...]({show_tree(u0)})#{h}"
    return repr(t)


# --------------------------------------------------------------------------
# interpreting evaluator normal forms


class OracleScopeError(Exception):
    """The term lies outside the fragment the oracle models."""


def leg_of(t: Term, scope: Scope = Scope()) -> Leg:
    nf = readback(t, _S1_TO_S1, scope)
    match nf:
        case Lam(x, Var(y)) if x == y:
            return LEG_ID
        case Lam(_, Con(_, _, "base", (), ())):
            return LEG_BASE
    raise OracleScopeError(f"pushout leg outside the modelled fragment: {nf}")


_S1_TO_S1 = None


def _init():
    global _S1_TO_S1
    from .syntax import Pi

    _S1_TO_S1 = Pi("_", HitType("S1"), HitType("S1"))


_init()


def interp_closed(names: Iterable[str], t: Term, ty: Term, scope: Scope = Scope()) -> Tree:
    """The tree of the closed element `t : ty` whose free dimensions lie in `names`."""
    ns = tuple(sorted(names))
    return _interp(ns, readback(t, ty, scope), ty, scope)


def pushout_legs(ty: Term, scope: Scope) -> tuple:
    if isinstance(ty, HitType) and ty.hit == "Pushout":
        return (leg_of(ty.params[3], scope), leg_of(ty.params[4], scope))
    return ()


def _interp(ns: tuple, nf: Term, ty: Term, scope: Scope) -> Tree:
    match nf:
        case Con(_, _, "base", (), ()):
            return TBase()
        case Con("S1", _, "loop", (), (r,)):
            return TLoop(r)
        case Con(_, _, "N", (), ()):
            return TN()
        case Con(_, _, "S", (), ()):
            return TS()
        case Con(_, ps, "merid", (a,), (r,)):
            return TMerid(_interp(ns, a, ps[0], scope), r)
        case Con(_, ps, "inl", (a,), ()):
            return TInl(_interp(ns, a, ps[0], scope))
        case Con(_, ps, "inr", (b,), ()):
            return TInr(_interp(ns, b, ps[1], scope))
        case Con(_, ps, "push", (c,), (r,)):
            return TPush(_interp(ns, c, ps[2], scope), r)
        case HComp(k, a, sys, u0):
            phi = _mk_face(c for f, _ in sys for c in f.conjs)
            sides = tuple(sys)
            memo: dict = {}

            def family(f: CubeMap, r: DimExpr, sides=sides, k=k, a=a) -> Tree:
                key = (f, r)
                if key in memo:
                    return memo[key]
                m = f.mapping
                for face, u in sides:
                    if face_subst(face, m).is_top:
                        body = subst(u, None, {**m, k: r})
                        memo[key] = interp_closed(f.dom, body, a, scope)
                        return memo[key]
                raise OracleScopeError("family queried outside its face")

            u0t = _interp(ns, u0, a, scope)
            h = 1 + max([tree_height(u0t)] + [_syntactic_height(u) for _, u in sides])
            return THComp(phi, family, u0t, h, pushout_legs(a, scope))
    raise OracleScopeError(f"no tree for {nf}")


def _syntactic_height(t: Term) -> int:
    match t:
        case HComp(_, _, sys, u0):
            return 1 + max([_syntactic_height(u0)] + [_syntactic_height(u) for _, u in sys])
        case Con(_, _, _, args, _):
            return max([0] + [_syntactic_height(a) for a in args])
    return 0


# --------------------------------------------------------------------------
# checks


@dataclass
class Verdict:
    passed: bool
    witness: Optional[str] = None


def stability_check(names: Iterable[str], t: Term, ty: Term, f: CubeMap, depth: int = 2, scope: Scope = Scope()) -> Verdict:
    """Restricting the tree of `t` along f agrees with the tree of t[f]."""
    ns = tuple(sorted(names))
    legs = pushout_legs(ty, scope)
    u = interp_closed(ns, t, ty, scope)
    left = tree_restrict(u, f, legs)
    right = interp_closed(f.dom, subst(t, None, f.mapping), subst(ty, None, f.mapping), scope)
    if tree_eq_probe(left, right, f.dom, depth):
        return Verdict(True)
    return Verdict(False, f"{show_tree(left)} vs {show_tree(right)} along {f}")


def functoriality_check(u: Tree, names: Iterable[str], depth: int = 1, legs: tuple = ()) -> Verdict:
    """(u f) g = u (f g) for every pair of probe maps."""
    ns = tuple(sorted(names))
    for f in probe_maps(ns):
        uf = tree_restrict(u, f, legs)
        for g in probe_maps(f.dom):
            left = tree_restrict(uf, g, legs)
            right = tree_restrict(u, f.compose(g), legs)
            if not tree_eq_probe(left, right, g.dom, depth):
                return Verdict(False, f"f={f}, g={g}: {show_tree(left)} vs {show_tree(right)}")
    return Verdict(True)


def pretree_counterexample() -> tuple[Tree, tuple]:
    """An hcomp pre-tree whose family ignores how it was reached (u_{f,r} g != u_{fg,rg})."""

    def family(f: CubeMap, r: DimExpr) -> Tree:
        return TLoop(DName(f.dom[0])) if f.dom else TBase()

    tree = THComp(face_conj({"i": 1}), family, TBase(), 1)
    return tree, ("i",)
