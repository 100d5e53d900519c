"""Self-test suites: the equality corpus, property suites and oracle agreement.

Each suite returns a SuiteResult; `kernel selftest` and the acceptance tests
both run these.
"""

from __future__ import annotations

import contextlib
import dataclasses
import functools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .corpus import CONTEXT, EQUATIONS, prelude_text
from .dimalg import ONE, ZERO, conj_subst, dim_eq, face_norm, face_subst
from .eval import GENERIC_TRANS, KernelError, Scope, convert, generic_trans_constructor, normalize, trans_value
from .generate import (
    Gen,
    comp_instance,
    dim_variant,
    face_variant,
    param_trans_instance,
    pushout_trans_instance,
    raw_dim,
    raw_face,
    scope_with_vars,
    seed_from_env,
)
from .oracle import (
    functoriality_check,
    interp_closed,
    pretree_counterexample,
    probe_maps,
    pushout_legs,
    stability_check,
    tree_height,
)
from .parser import ParseError, parse_expr, parse_module, pretty
from .reference import face_equiv, rewrite_eq
from .syntax import (
    BUILTINS,
    Con,
    Constructor,
    HITDecl,
    HitType,
    Pi,
    Trans,
    U,
    alpha_eq,
    comp,
    face_eq,
    free_dims,
    subst,
)
from .typecheck import Checker, Ctx, TypeCheckError, check_module, validate_decl


@dataclass
class SuiteResult:
    name: str
    total: int = 0
    failures: list = field(default_factory=list)
    elapsed: float = 0.0
    skipped: bool = False

    @property
    def ok(self) -> bool:
        return self.skipped or not self.failures

    @property
    def passed(self) -> int:
        return self.total - len(self.failures)

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def line(self) -> str:
        """One deterministic summary line (no timings)."""
        if self.skipped:
            return f"{self.name}: SKIPPED"
        status = "PASS" if self.ok else "FAIL"
        return f"{self.name}: {status} {self.passed}/{self.total}"


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    @functools.wraps(fn)
    def run(*args, **kw) -> SuiteResult:
        t0 = time.perf_counter()
        res = fn(*args, **kw)
        res.elapsed = time.perf_counter() - t0
        return res

    return run


# --------------------------------------------------------------------------
# corpus


def load_context(extra: str = CONTEXT) -> tuple[Checker, tuple]:
    mod = parse_module(prelude_text() + extra, "prelude.chit")
    return check_module(mod), mod.names()


def check_equation(ck: Checker, names, lhs: str, rhs: str, ty: str) -> Optional[str]:
    """None if both sides elaborate at ty and share a normal form, else why not."""
    try:
        l, r, a = (parse_expr(s, scope=names) for s in (lhs, rhs, ty))
        ctx = ck.ctx(free_dims(l) | free_dims(r) | free_dims(a))
        a2 = ck.check_type(a, ctx)
        nl = normalize(ck.check(l, a2, ctx), a2, ctx.scope)
        nr = normalize(ck.check(r, a2, ctx), a2, ctx.scope)
    except (ParseError, TypeCheckError, KernelError) as e:
        return f"{type(e).__name__}: {e}"
    if alpha_eq(nl, nr):
        return None
    return f"{pretty(nl)} /= {pretty(nr)}"


@_timed
def corpus_suite() -> SuiteResult:
    """Every corpus equation holds judgmentally."""
    res = SuiteResult("corpus")
    ck, names = load_context()
    for eq in EQUATIONS:
        res.total += 1
        why = check_equation(ck, names, eq.lhs, eq.rhs, eq.type)
        if why:
            res.fail(f"{eq.name}: {why}")
    return res


@contextlib.contextmanager
def mutant_loop_boundary():
    """Temporarily forget loop's boundary, so loop 0 no longer reduces to base."""
    saved = BUILTINS["S1"]
    cons = tuple(dataclasses.replace(c, boundary=()) if c.name == "loop" else c for c in saved.constructors)
    BUILTINS["S1"] = dataclasses.replace(saved, constructors=cons)
    try:
        yield
    finally:
        BUILTINS["S1"] = saved


@_timed
def mutant_suite() -> SuiteResult:
    """The corpus must notice a kernel that drops loop's boundary."""
    res = SuiteResult("mutant", total=1)
    try:
        with mutant_loop_boundary():
            ck, names = load_context()
            caught = [e.name for e in EQUATIONS if e.name.startswith("loop-") and check_equation(ck, names, e.lhs, e.rhs, e.type)]
    except (TypeCheckError, KernelError):
        caught = ["prelude"]
    if not caught:
        res.fail("mutant kernel passed the corpus")
    return res


# --------------------------------------------------------------------------
# torus maps

TORUS_POINTS = ("b", "tp i", "tq i", "surf i j")


@_timed
def torus_suite() -> SuiteResult:
    """f2 (f1 x) normalizes to x on every torus constructor."""
    res = SuiteResult("torus")
    ck, names = load_context("")
    for x in TORUS_POINTS:
        res.total += 1
        why = check_equation(ck, names, f"f2 (f1 ({x}))", x, "T")
        if why:
            res.fail(f"{x}: {why}")
    return res


# --------------------------------------------------------------------------
# property suites


@_timed
def stability_suite(n: int = 1000, seed: Optional[int] = None) -> SuiteResult:
    """nf(t[s]) = nf(nf(t)[s]) on random well-typed terms and substitutions."""
    res = SuiteResult("stability")
    g = Gen.seeded(seed)
    scope = scope_with_vars()
    for _ in range(n):
        t, ty, dims = g.typed_term(depth=4, ndims=3)
        s = g.dim_subst(dims)
        ty_s = subst(ty, None, s)
        res.total += 1
        try:
            a = normalize(subst(t, None, s), ty_s, scope)
            b = normalize(subst(normalize(t, ty, scope), None, s), ty_s, scope)
        except KernelError as e:
            res.fail(f"{pretty(t)}: {e}")
            continue
        if not alpha_eq(a, b):
            res.fail(f"{pretty(t)} under {s}")
    return res


@_timed
def typing_suite(n: int = 200, seed: Optional[int] = None) -> SuiteResult:
    """Generated terms typecheck at their intended type."""
    res = SuiteResult("generator-typing")
    g = Gen.seeded(seed)
    ck = Checker()
    scope = scope_with_vars()
    for _ in range(n):
        t, ty, dims = g.typed_term(depth=4, ndims=3)
        res.total += 1
        try:
            ck.check(t, ty, Ctx(scope, dims))
        except TypeCheckError as e:
            res.fail(f"{pretty(t)}: {e}")
    return res


@_timed
def comp_suite(n: int = 200, seed: Optional[int] = None) -> SuiteResult:
    """comp on phi agrees with the side at 1; on 1F it is the side."""
    res = SuiteResult("comp-contract")
    g = Gen.seeded(seed)
    scope = scope_with_vars()
    for _ in range(n):
        i, line, phi, w, u0 = comp_instance(g)
        t = comp(i, line, ((phi, w),), u0)
        ty1 = subst(line, None, {i: ONE})
        res.total += 1
        for c in phi.conjs:
            s = conj_subst(c)
            a = normalize(subst(t, None, s), subst(ty1, None, s), scope)
            b = normalize(subst(w, None, {**s, i: ONE}), subst(ty1, None, s), scope)
            if not alpha_eq(a, b):
                res.fail(f"{pretty(t)} on {dict(c)}")
                break
    return res


def _contracts(i, line, phi, u0, result, scope) -> Optional[str]:
    """phi-restriction and constructor-endpoint contracts for a transport result."""
    ty1 = subst(line, None, {i: ONE})
    for c in phi.conjs:
        s = conj_subst(c)
        if not convert(subst(ty1, None, s), subst(result, None, s), subst(u0, None, s), scope):
            return f"phi-restriction on {dict(c)}"
    if isinstance(u0, Con) and u0.dims:
        d = BUILTINS[u0.hit]
        c0 = d.con(u0.con)
        face = face_subst(c0.face, dict(zip(c0.dims, u0.dims)))
        for c in face.conjs:
            s = conj_subst(c)
            want = trans_value(Trans(i, subst(line, None, s), face_subst(phi, s), subst(u0, None, s)), scope)
            if not convert(subst(ty1, None, s), subst(result, None, s), want, scope):
                return f"endpoint on {dict(c)}"
    return None


@_timed
def transport_suite(n: int = 100, seed: Optional[int] = None) -> SuiteResult:
    """Generic constructor transport against the direct per-HIT rules."""
    res = SuiteResult("generic-transport")
    g = Gen.seeded(seed)
    scope = Scope()
    po = BUILTINS["Pushout"]
    for _ in range(n):
        i, line, phi, u0, _ = pushout_trans_instance(g)
        res.total += 1
        direct = trans_value(Trans(i, line, phi, u0), scope)
        generic = generic_trans_constructor(po, i, line.params, phi, u0.con, u0.args, u0.dims)
        if not convert(subst(line, None, {i: ONE}), direct, generic, scope):
            res.fail(f"pushout {pretty(u0)} along {phi}")
    for hit in ("Susp", "Trunc"):
        for _ in range(n // 2):
            i, line, phi, u0 = param_trans_instance(g, hit)
            res.total += 1
            d = BUILTINS[hit]
            direct = trans_value(Trans(i, line, phi, u0), scope)
            generic = generic_trans_constructor(d, i, line.params, phi, u0.con, u0.args, u0.dims)
            for label, val in (("direct", direct), ("generic", generic)):
                why = _contracts(i, line, phi, u0, val, scope)
                if why:
                    res.fail(f"{hit} {label} {pretty(u0)}: {why}")
                    break
    return res


@_timed
def generic_flag_suite(n: int = 50, seed: Optional[int] = None) -> SuiteResult:
    """With generic transport switched on, stability still holds."""
    token = GENERIC_TRANS.set(True)
    try:
        res = stability_suite(n, seed)
    finally:
        GENERIC_TRANS.reset(token)
    res.name = "stability-generic-trans"
    return res


# --------------------------------------------------------------------------
# oracle

ORACLE_KINDS = ("S1", "Susp", "PO", "PO2")


def oracle_corpus(n: int = 40, seed: Optional[int] = None, max_height: int = 3) -> list:
    """Closed S1/Susp/pushout terms over two dimensions with trees of bounded height."""
    g = Gen.seeded(seed, allow_vars=False)
    names = ("i", "j")
    out = []
    while len(out) < n:
        t, ty, _ = g.typed_term(depth=3, ndims=2, kinds=ORACLE_KINDS)
        u = interp_closed(names, t, ty)
        if tree_height(u) <= max_height:
            out.append((t, ty, u))
    return out


@_timed
def oracle_suite(n: int = 40, probe_depth: int = 2, seed: Optional[int] = None) -> SuiteResult:
    """Stability against trees, functoriality of restriction, and the pre-tree caveat."""
    res = SuiteResult("oracle")
    if probe_depth <= 0:
        res.skipped = True
        return res
    names = ("i", "j")
    for t, ty, u in oracle_corpus(n, seed):
        res.total += 1
        for f in probe_maps(names):
            v = stability_check(names, t, ty, f, probe_depth)
            if not v.passed:
                res.fail(f"stability {pretty(t)}: {v.witness}")
                break
        else:
            v = functoriality_check(u, names, max(1, probe_depth - 1), pushout_legs(ty, Scope()))
            if not v.passed:
                res.fail(f"functoriality {pretty(t)}: {v.witness}")
    res.total += 1
    bad, ns = pretree_counterexample()
    if functoriality_check(bad, ns, 1).passed:
        res.fail("pre-tree counterexample was not detected")
    return res


# --------------------------------------------------------------------------
# interval and faces


@_timed
def dimalg_suite(n: int = 10_000, seed: Optional[int] = None) -> SuiteResult:
    """DM4 equality against rewriting, and uniqueness of canonical faces."""
    res = SuiteResult("dimalg")
    rng = random.Random(seed_from_env() if seed is None else seed)
    names = ("i", "j", "k", "l")
    for m in range(n):
        a = raw_dim(rng, names)
        b = dim_variant(rng, a, names) if m % 2 else raw_dim(rng, names)
        res.total += 1
        if dim_eq(a, b) != rewrite_eq(a, b):
            res.fail(f"dim_eq disagrees on {a!r} and {b!r}")
    for m in range(n):
        p = raw_face(rng, names)
        q = face_variant(rng, p, names) if m % 2 else raw_face(rng, names)
        res.total += 1
        same_bytes = repr(face_norm(p)).encode() == repr(face_norm(q)).encode()
        if face_equiv(p, q) != same_bytes:
            res.fail(f"face canonical form not unique for {p!r} and {q!r}")
    return res


# --------------------------------------------------------------------------
# negative suite

NEGATIVE_SOURCES = (
    (
        "merid-left-endpoint",
        "BoundaryMismatch",
        "m : (A : U) -> A -> Path (Susp A) N{A} N{A} = \\A a -> <i> merid{A} a i",
    ),
    (
        "merid-right-endpoint",
        "BoundaryMismatch",
        "m : (A : U) -> A -> Path (Susp A) S{A} S{A} = \\A a -> <i> merid{A} a i",
    ),
    (
        "system-same-face",
        "SystemIncompatible",
        "bad : Path S1 base base = <j> hcomp^k S1 [(j=0) -> loop k, (j=0) -> base] base",
    ),
    (
        "system-corner",
        "SystemIncompatible",
        "bad = <i> <j> hcomp^k S1 [(i=0) -> loop k, (j=0) -> base] base",
    ),
    (
        "trans-not-constant",
        "ConstancyViolation",
        "postulate A : U\npostulate B : U\npostulate c : Path U A B\npostulate a : A\nbad : B = trans^i (c @ i) 1F a",
    ),
    (
        "trans-not-constant-on-face",
        "ConstancyViolation",
        "bad = <j> trans^i (Path S1 base (loop (i /\\ j))) (j=1) (<l> base)",
    ),
    (
        "universe-trans",
        "UnsupportedUniverseKan",
        "postulate A : U\nbad : U = trans^i U 0F A",
    ),
    (
        "universe-hcomp",
        "UnsupportedUniverseKan",
        "postulate A : U\nbad : U = hcomp^k U [] A",
    ),
)


def _later_constructor_decl() -> HITDecl:
    """p's boundary mentions q, which is declared after it."""
    return HITDecl(
        "Bad",
        (),
        (
            Constructor("pt", (), ()),
            Constructor("p", (), ("i",), ((face_eq("i", 0), Con("Bad", (), "q", (), (ZERO,))),)),
            Constructor("q", (), ("i",), ((face_eq("i", 0), Con("Bad", (), "pt")),)),
        ),
    )


def _negative_occurrence_decl() -> HITDecl:
    """A constructor taking a function out of the type being defined."""
    return HITDecl("Neg", (), (Constructor("lam", (("f", Pi("_", HitType("Neg"), U())),), ()),))


NEGATIVE_DECLS = (
    ("schema-later-constructor", "SchemaViolation", _later_constructor_decl),
    ("schema-negative-occurrence", "SchemaViolation", _negative_occurrence_decl),
)


def negative_cases() -> list[tuple[str, str, Callable[[], None]]]:
    def source(text: str):
        return lambda: check_module(parse_module(text, "negative.chit"))

    def decl(mk):
        return lambda: validate_decl(mk())

    return [(n, k, source(s)) for n, k, s in NEGATIVE_SOURCES] + [(n, k, decl(mk)) for n, k, mk in NEGATIVE_DECLS]


@_timed
def negative_suite() -> SuiteResult:
    """Each ill-formed input is rejected with its designated error kind."""
    res = SuiteResult("negative")
    for name, kind, run in negative_cases():
        res.total += 1
        try:
            run()
        except TypeCheckError as e:
            if e.kind != kind:
                res.fail(f"{name}: expected {kind}, got {e.kind}: {e}")
            continue
        except (ParseError, KernelError) as e:
            res.fail(f"{name}: expected {kind}, got {type(e).__name__}: {e}")
            continue
        res.fail(f"{name}: accepted")
    return res


# --------------------------------------------------------------------------


def all_suites(probe_depth: int = 2, seed: Optional[int] = None) -> list[SuiteResult]:
    return [
        corpus_suite(),
        mutant_suite(),
        torus_suite(),
        negative_suite(),
        typing_suite(200, seed),
        stability_suite(1000, seed),
        comp_suite(200, seed),
        transport_suite(100, seed),
        dimalg_suite(10_000, seed),
        oracle_suite(40, probe_depth, seed),
    ]


__all__ = [
    "SuiteResult",
    "all_suites",
    "comp_suite",
    "corpus_suite",
    "dimalg_suite",
    "generic_flag_suite",
    "mutant_suite",
    "negative_cases",
    "negative_suite",
    "oracle_corpus",
    "oracle_suite",
    "stability_suite",
    "torus_suite",
    "transport_suite",
    "typing_suite",
]
