"""Concrete syntax for `.chit` modules and expressions, plus a round-tripping printer."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .dimalg import (
    FACE_BOT,
    FACE_TOP,
    DimExpr,
    DName,
    FaceFormula,
    ONE,
    ZERO,
    face_and,
    face_eq_dim,
    face_or,
    fresh,
    join,
    meet,
    neg,
    show_dim,
)
from .syntax import (
    BUILTINS,
    CONSTRUCTORS,
    MAX_SPHERE,
    App,
    Branch,
    Con,
    Elim,
    Fst,
    HComp,
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
    comp,
    ctrans,
    ctrans_fill,
    free_dims,
    free_vars,
    hfill,
    squeeze,
    trans_fill,
)


class ParseError(Exception):
    """A syntax error at (line, col), with the set of tokens that would have been accepted."""

    def __init__(self, line: int, col: int, expected, got: str = ""):
        self.line, self.col = line, col
        self.expected = frozenset(expected)
        self.got = got
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"{line}:{col}: expected one of {{{exp}}}, got {got or 'end of input'}")


@dataclass
class Definition:
    name: str
    type: Optional[Term]
    body: Optional[Term]  # None for postulates
    pos: tuple = (1, 1)

    @property
    def is_postulate(self) -> bool:
        return self.body is None


@dataclass
class SourceModule:
    defs: list = field(default_factory=list)
    filename: str = "<input>"

    def names(self) -> list[str]:
        return [d.name for d in self.defs]


# --------------------------------------------------------------------------
# lexer

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|--[^\n]*)
  | (?P<nl>\n)
  | (?P<face>[01]F(?![A-Za-z0-9_']))
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>->|/\\|\\/|\.1|\.2|[\\<>()\[\]{},:=*@^.~;-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Tok:
    kind: str  # ident | num | face | sym | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    out, line, start, i = [], 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(line, i - start + 1, {"token"}, repr(text[i]))
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind != "ws":
            out.append(Tok(kind, m.group(), line, i - start + 1))
        i = m.end()
    return out


KEYWORDS = {
    "hcomp", "trans", "comp", "hfill", "transFill", "squeeze", "ctrans", "ctransFill",
    "elim", "Path", "U", "postulate", "Susp", "Trunc", "Pushout",
} | set(BUILTINS)

_KAN_SYS = {"hcomp", "comp", "hfill"}
_KAN_FACE = {"trans", "transFill", "squeeze", "ctrans", "ctransFill"}


# --------------------------------------------------------------------------
# parser


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, toks: list[Tok], scope=()):
        self.toks = toks
        self.i = 0
        self.scope: list[str] = list(scope)
        self.limit = len(toks)
        self.furthest: Optional[ParseError] = None  # deepest error swallowed by backtracking

    # token helpers

    def peek(self, k: int = 0) -> Tok:
        j = self.i + k
        if j < self.limit:
            return self.toks[j]
        last = self.toks[self.limit - 1] if self.limit else None
        if j < len(self.toks):
            t = self.toks[j]
            return Tok("eof", "", t.line, t.col)
        return Tok("eof", "", last.line if last else 1, (last.col + len(last.text)) if last else 1)

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("sym", "ident", "face") and t.text == text

    def fail(self, expected):
        t = self.peek()
        e = ParseError(t.line, t.col, expected, t.text)
        best = self.furthest
        if best is not None and (best.line, best.col) > (e.line, e.col):
            raise best
        if best is not None and (best.line, best.col) == (e.line, e.col):
            e = ParseError(e.line, e.col, e.expected | best.expected, e.got)
        raise e

    def remember(self, e: ParseError) -> None:
        if self.furthest is None or (e.line, e.col) > (self.furthest.line, self.furthest.col):
            self.furthest = e

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.fail({text})
        return self.advance()

    def advance(self) -> Tok:
        t = self.peek()
        self.i += 1
        return t

    def ident(self) -> str:
        t = self.peek()
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail({"identifier"})
        self.i += 1
        return t.text

    def binder(self) -> str:
        t = self.peek()
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.i += 1
            return t.text
        self.fail({"binder"})

    def bound(self, name: str) -> bool:
        return name in self.scope

    def with_bound(self, names, fn):
        n = len(self.scope)
        self.scope.extend(names)
        try:
            return fn()
        finally:
            del self.scope[n:]

    def pos(self) -> tuple:
        t = self.peek()
        return (t.line, t.col)

    # dimensions

    def dim(self) -> DimExpr:
        r = self.dim_conj()
        while self.at("\\/"):
            self.advance()
            r = join(r, self.dim_conj())
        return r

    def dim_conj(self) -> DimExpr:
        r = self.dim_neg()
        while self.at("/\\"):
            self.advance()
            r = meet(r, self.dim_neg())
        return r

    def dim_neg(self) -> DimExpr:
        if self.at("-") or self.at("~"):
            self.advance()
            return neg(self.dim_neg())
        return self.dim_atom()

    def dim_atom(self) -> DimExpr:
        t = self.peek()
        if t.kind == "num" and t.text in ("0", "1"):
            self.advance()
            return ZERO if t.text == "0" else ONE
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.advance()
            return DName(t.text)
        if self.at("("):
            self.advance()
            r = self.dim()
            self.expect(")")
            return r
        self.fail({"0", "1", "dimension name", "-", "("})

    def dim_start(self) -> bool:
        t = self.peek()
        if t.kind == "num":
            return t.text in ("0", "1")
        if t.kind == "ident":
            return t.text not in KEYWORDS and not self.bound(t.text) and t.text not in CONSTRUCTORS
        return self.at("-") or self.at("~") or self.at("(")

    def try_dim(self) -> Optional[DimExpr]:
        """A dimension argument, or None (with no input consumed)."""
        if not self.dim_start():
            return None
        save = self.i
        try:
            return self.dim_neg()
        except ParseError as e:
            self.remember(e)
            self.i = save
            return None

    # faces

    def face(self) -> FaceFormula:
        phi = self.face_conj()
        while self.at("\\/"):
            self.advance()
            phi = face_or(phi, self.face_conj())
        return phi

    def face_conj(self) -> FaceFormula:
        phi = self.face_atom()
        while self.at("/\\"):
            self.advance()
            phi = face_and(phi, self.face_atom())
        return phi

    def face_atom(self) -> FaceFormula:
        t = self.peek()
        if t.kind == "face":
            self.advance()
            return FACE_BOT if t.text == "0F" else FACE_TOP
        if self.at("("):
            save = self.i
            self.advance()
            try:
                r = self.dim()
                self.expect("=")
                b = self.advance()
                if b.kind != "num" or b.text not in ("0", "1"):
                    raise ParseError(b.line, b.col, {"0", "1"}, b.text)
                self.expect(")")
                return face_eq_dim(r, int(b.text))
            except ParseError as e:
                self.remember(e)
                self.i = save
            self.advance()
            phi = self.face()
            self.expect(")")
            return phi
        self.fail({"0F", "1F", "("})

    # terms

    def expr(self) -> Term:
        p = self.pos()
        if self.at("\\"):
            self.advance()
            names = [self.binder()]
            while not self.at("->"):
                names.append(self.binder())
            self.advance()
            body = self.with_bound(names, self.expr)
            for x in reversed(names):
                body = Lam(x, body, pos=p)
            return body
        if self.at("<"):
            self.advance()
            dims = [self.binder()]
            while not self.at(">"):
                dims.append(self.binder())
            self.advance()
            body = self.expr()
            for i in reversed(dims):
                body = PLam(i, body, pos=p)
            return body
        if self.at("(") and self._is_telescope():
            self.advance()
            names = [self.binder()]
            while not self.at(":"):
                names.append(self.binder())
            self.advance()
            dom = self.expr()
            self.expect(")")
            if self.at("->"):
                former = Pi
            elif self.at("*"):
                former = Sigma
            else:
                self.fail({"->", "*"})
            self.advance()
            body = self.with_bound(names, self.expr)
            for x in reversed(names):
                body = former(x, dom, body, pos=p)
            return body
        a = self.sigma()
        if self.at("->"):
            self.advance()
            return Pi("_", a, self.expr(), pos=p)
        return a

    def _is_telescope(self) -> bool:
        k = 1
        while self.peek(k).kind == "ident" and self.peek(k).text not in KEYWORDS:
            k += 1
        return k > 1 and self.peek(k).text == ":" and self.peek(k).kind == "sym"

    def sigma(self) -> Term:
        p = self.pos()
        a = self.papp()
        if self.at("*"):
            self.advance()
            return Sigma("_", a, self.sigma(), pos=p)
        return a

    def papp(self) -> Term:
        t = self.app()
        while self.at("@"):
            p = self.pos()
            self.advance()
            t = PApp(t, self.dim_neg(), pos=p)
        return t

    def atom_start(self) -> bool:
        t = self.peek()
        if t.kind == "ident":
            return t.text not in KEYWORDS or t.text in ("U", "S1", "S2", "S3", "S4", "T", "TF")
        return self.at("(")

    def app(self) -> Term:
        p = self.pos()
        t = self.peek()
        if t.kind == "ident" and t.text in _KAN_SYS | _KAN_FACE:
            head = self.kan()
        elif t.kind == "ident" and t.text == "elim":
            head = self.elim()
        elif t.kind == "ident" and t.text == "Path":
            head = self.path_type()
        elif t.kind == "ident" and t.text in ("Susp", "Trunc", "Pushout"):
            self.advance()
            n = len(BUILTINS[t.text].params)
            head = HitType(t.text, tuple(self.atom() for _ in range(n)), pos=p)
        elif t.kind == "ident" and t.text in CONSTRUCTORS and not self.bound(t.text):
            head = self.constructor(full=True)
        else:
            head = self.atom()
        while self.atom_start():
            head = App(head, self.atom(), pos=p)
        return head

    def atom(self) -> Term:
        p = self.pos()
        t = self.peek()
        if t.kind == "ident":
            if t.text == "U":
                self.advance()
                return self.postfix(U(pos=p))
            if t.text in BUILTINS and not BUILTINS[t.text].params:
                self.advance()
                return self.postfix(HitType(t.text, (), pos=p))
            if t.text in CONSTRUCTORS and not self.bound(t.text):
                return self.postfix(self.constructor(full=False))
            if t.text in KEYWORDS:
                self.fail({"atom"})
            self.advance()
            return self.postfix(Var(t.text, pos=p))
        if self.at("("):
            self.advance()
            a = self.expr()
            if self.at(","):
                self.advance()
                b = self.expr()
                self.expect(")")
                return self.postfix(Pair(a, b, pos=p))
            self.expect(")")
            return self.postfix(a)
        self.fail({"identifier", "(", "U"})

    def postfix(self, t: Term) -> Term:
        while self.at(".1") or self.at(".2"):
            p = self.pos()
            t = Fst(t, pos=p) if self.advance().text == ".1" else Snd(t, pos=p)
        return t

    def path_type(self) -> Term:
        p = self.pos()
        self.expect("Path")
        if self.at("^"):
            self.advance()
            i = self.binder()
        else:
            i = "_i"
        return PathP(i, self.atom(), self.atom(), self.atom(), pos=p)

    def kan(self) -> Term:
        p = self.pos()
        op = self.advance().text
        self.expect("^")
        i = self.binder()
        a = self.atom()
        if op in _KAN_SYS:
            sys = self.system()
            u0 = self.atom()
            build = {"hcomp": lambda: HComp(i, a, sys, u0, pos=p), "comp": lambda: comp(i, a, sys, u0),
                     "hfill": lambda: hfill(i, a, sys, u0)}
            return build[op]()
        phi = self.face_atom()
        u0 = self.atom()
        match op:
            case "trans":
                return Trans(i, a, phi, u0, pos=p)
            case "transFill":
                return trans_fill(i, a, phi, u0)
            case "squeeze":
                return squeeze(i, a, phi, u0)
            case "ctrans":
                return ctrans(i, a, phi, u0)
            case _:
                return ctrans_fill(i, a, phi, u0)

    def system(self) -> tuple:
        self.expect("[")
        out = []
        while not self.at("]"):
            phi = self.face()
            self.expect("->")
            out.append((phi, self.expr()))
            if not self.at("]"):
                self.expect(",")
        self.advance()
        return tuple(out)

    def con_params(self):
        if not self.at("{"):
            return None
        self.advance()
        ps = []
        while not self.at("}"):
            ps.append(self.expr())
            if not self.at("}"):
                self.expect(",")
        self.advance()
        return ps

    def constructor(self, full: bool) -> Term:
        p = self.pos()
        name = self.advance().text
        ps = self.con_params()
        hits = CONSTRUCTORS[name]
        hit = hits[0] if len(hits) == 1 else None
        params = None
        if ps is not None:
            if len(ps) == 1 and isinstance(ps[0], HitType) and ps[0].hit in hits:
                hit, params = ps[0].hit, ()
            else:
                params = tuple(ps)
        elif hit is not None and not BUILTINS[hit].params:
            params = ()
        if name == "loop" and hit is None:
            dims = []
            while full and len(dims) < MAX_SPHERE:
                r = self.try_dim()
                if r is None:
                    break
                dims.append(r)
            hit = f"S{max(len(dims), 1)}"
            return self._eta(hit, (), name, [], dims, p)
        if name == "base" and hit is None:
            return Con(None, None, "base", pos=p)
        c = BUILTINS[hit].con(name)
        args, dims = [], []
        if full:
            while len(args) < len(c.args) and self.atom_start():
                args.append(self.atom())
            if len(args) == len(c.args):
                while len(dims) < len(c.dims):
                    r = self.try_dim()
                    if r is None:
                        break
                    dims.append(r)
        return self._eta(hit, params, name, args, dims, p)

    def _eta(self, hit, params, name, args, dims, p) -> Term:
        c = BUILTINS[hit].con(name)
        extra_x = [fresh(x) for x, _ in c.args[len(args):]]
        extra_i = [fresh(i) for i in c.dims[len(dims):]]
        body = Con(
            hit,
            params,
            name,
            tuple(args) + tuple(Var(x) for x in extra_x),
            tuple(dims) + tuple(DName(i) for i in extra_i),
            pos=p,
        )
        for i in reversed(extra_i):
            body = PLam(i, body, pos=p)
        for x in reversed(extra_x):
            body = Lam(x, body, pos=p)
        return body

    def elim(self) -> Term:
        p = self.pos()
        self.expect("elim")
        self.expect("[")
        x = self.binder()
        hit_ty = None
        if self.at(":"):
            self.advance()
            hit_ty = self.sigma()
        self.expect(".")
        motive = self.with_bound([x], self.expr)
        self.expect("]")
        scrut = self.atom()
        self.expect("[")
        branches, hits = [], set()
        while not self.at("]"):
            bp = self.pos()
            t = self.peek()
            if t.kind != "ident" or t.text not in CONSTRUCTORS:
                self.fail({"constructor"})
            self.advance()
            names = []
            while not self.at("->"):
                names.append(self.binder())
            self.advance()
            decl = self._branch_decl(hit_ty, t.text, len(names), bp)
            if t.text != "base":
                # base has the same shape in every sphere
                hits.add(decl.name)
            c = decl.con(t.text)
            na, nd = len(c.args), len(c.dims)
            nrec = sum(1 for _, ty in c.args if decl.is_recursive_arg(ty))
            if len(names) == na + nrec + nd:
                vs, rvs, ds = names[:na], names[na:na + nrec], names[na + nrec:]
            elif len(names) == na + nd:
                vs, ds = names[:na], names[na:]
                rvs = [fresh(v) for v, (_, ty) in zip(vs, c.args) if decl.is_recursive_arg(ty)]
            else:
                raise ParseError(bp[0], bp[1], {f"{na + nd} or {na + nrec + nd} binders"}, str(len(names)))
            body = self.with_bound(vs + rvs, self.expr)
            branches.append(Branch(t.text, tuple(vs), tuple(rvs), tuple(ds), body))
            if not self.at("]"):
                self.expect(",")
        self.advance()
        if len(hits) > 1:
            raise ParseError(p[0], p[1], {"eliminator branches of a single type"}, "elim")
        return Elim(hit_ty, x, motive, tuple(branches), scrut, pos=p)

    def _branch_decl(self, hit_ty, con, nnames, bp):
        if isinstance(hit_ty, HitType):
            return BUILTINS[hit_ty.hit]
        hits = CONSTRUCTORS[con]
        if len(hits) == 1:
            return BUILTINS[hits[0]]
        if con == "loop" and 1 <= nnames <= MAX_SPHERE:
            return BUILTINS[f"S{nnames}"]
        return BUILTINS["S1"]


def _split_items(toks: list[Tok]) -> list[list[Tok]]:
    items: list[list[Tok]] = []
    for t in toks:
        if t.col == 1 or not items:
            items.append([])
        items[-1].append(t)
    return items


def parse_module(text: str, filename: str = "<input>") -> SourceModule:
    mod = SourceModule([], filename)
    seen: set = set()
    for item in _split_items(tokenize(text)):
        ps = Parser(item, scope=seen)
        p = ps.pos()
        if ps.at("postulate"):
            ps.advance()
            name = ps.ident()
            ps.expect(":")
            ty, body = ps.expr(), None
        else:
            name = ps.ident()
            ty = None
            if ps.at(":"):
                ps.advance()
                ty = ps.expr()
            ps.expect("=")
            body = ps.expr()
        if ps.peek().kind != "eof":
            ps.fail({"end of definition"})
        if name in seen:
            raise ParseError(p[0], p[1], {"fresh top-level name"}, name)
        seen.add(name)
        mod.defs.append(Definition(name, ty, body, p))
    return mod


def parse_expr(text: str, scope=()) -> Term:
    ps = Parser(tokenize(text), scope)
    t = ps.expr()
    if ps.peek().kind != "eof":
        ps.fail({"end of input"})
    return t


def parse_face(text: str) -> FaceFormula:
    ps = Parser(tokenize(text))
    phi = ps.face()
    if ps.peek().kind != "eof":
        ps.fail({"end of input"})
    return phi


def parse_dim(text: str) -> DimExpr:
    ps = Parser(tokenize(text))
    r = ps.dim()
    if ps.peek().kind != "eof":
        ps.fail({"end of input"})
    return r


# --------------------------------------------------------------------------
# printer

# precedence: 0 binders/arrows, 1 sigma, 2 path application, 3 application, 4 atom


def show_face_atom(phi: FaceFormula) -> str:
    if phi.is_bot:
        return "0F"
    if phi.is_top:
        return "1F"
    parts = [" /\\ ".join(f"({n}={b})" for n, b in c) for c in phi.conjs]
    if len(parts) == 1 and len(phi.conjs[0]) == 1:
        return parts[0]
    return "(" + " \\/ ".join(parts) + ")"


def pretty(t: Term, prec: int = 0) -> str:
    def paren(s: str, level: int) -> str:
        return f"({s})" if prec > level else s

    match t:
        case Var(n):
            return n
        case U():
            return "U"
        case Pi(x, a, b):
            if x in free_vars(b):
                return paren(f"({x} : {pretty(a)}) -> {pretty(b)}", 0)
            return paren(f"{pretty(a, 1)} -> {pretty(b)}", 0)
        case Sigma(x, a, b):
            if x in free_vars(b):
                return paren(f"({x} : {pretty(a)}) * {pretty(b)}", 0)
            return paren(f"{pretty(a, 2)} * {pretty(b, 1)}", 1)
        case Lam():
            xs = []
            while isinstance(t, Lam):
                xs.append(t.name)
                t = t.body
            return paren(f"\\{' '.join(xs)} -> {pretty(t)}", 0)
        case PLam():
            ds = []
            while isinstance(t, PLam):
                ds.append(t.dim)
                t = t.body
            return paren(f"<{' '.join(ds)}> {pretty(t)}", 0)
        case App(f, a):
            return paren(f"{pretty(f, 3)} {pretty(a, 4)}", 3)
        case Pair(a, b):
            return f"({pretty(a)}, {pretty(b)})"
        case Fst(a):
            return f"{pretty(a, 4)}.1"
        case Snd(a):
            return f"{pretty(a, 4)}.2"
        case PathP(i, a, l, r):
            head = f"Path^{i}" if i in free_dims(a) else "Path"
            return paren(f"{head} {pretty(a, 4)} {pretty(l, 4)} {pretty(r, 4)}", 3)
        case PApp(p, r):
            return paren(f"{pretty(p, 2)} @ {show_dim(r, 3)}", 2)
        case HitType(h, ps):
            if not ps:
                return h
            return paren(" ".join([h] + [pretty(p, 4) for p in ps]), 3)
        case Con(h, ps, c, args, dims):
            head = c
            if ps:
                head += "{" + ", ".join(pretty(p) for p in ps) + "}"
            elif c == "base" and h not in (None, "S1"):
                head += "{" + h + "}"
            parts = [head] + [pretty(a, 4) for a in args] + [show_dim(r, 3) for r in dims]
            if len(parts) == 1:
                return head
            return paren(" ".join(parts), 3)
        case HComp(i, a, sys, u0):
            return paren(f"hcomp^{i} {pretty(a, 4)} {show_system(sys)} {pretty(u0, 4)}", 3)
        case Trans(i, a, phi, u0):
            return paren(f"trans^{i} {pretty(a, 4)} {show_face_atom(phi)} {pretty(u0, 4)}", 3)
        case Elim(d, x, p, brs, s):
            ann = f"{x} : {pretty(d, 1)}. " if d is not None else f"{x}. "
            bs = ", ".join(
                " ".join((br.con,) + br.vars + br.rec_vars + br.dims) + " -> " + pretty(br.body)
                for br in brs
            )
            return paren(f"elim [{ann}{pretty(p)}] {pretty(s, 4)} [{bs}]", 3)
    raise TypeError(f"not a term: {t!r}")


def show_system(sys) -> str:
    inner = ", ".join(f"{_show_face_sys(phi)} -> {pretty(u)}" for phi, u in sys)
    return f"[{inner}]"


def _show_face_sys(phi: FaceFormula) -> str:
    if phi.is_bot:
        return "0F"
    if phi.is_top:
        return "1F"
    return " \\/ ".join(" /\\ ".join(f"({n}={b})" for n, b in c) for c in phi.conjs)
