"""Judgmental-equality corpus: computation rules of the HITs stated as equations.

Each entry is checked by elaborating both sides at the stated type and
comparing normal forms up to renaming of bound names.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources


@dataclass(frozen=True)
class Equation:
    name: str
    lhs: str
    rhs: str
    type: str


def prelude_text() -> str:
    return resources.files("hitkernel").joinpath("lib/prelude.chit").read_text()


CONTEXT = """
postulate A : U
postulate a : A
postulate a' : A
postulate q : Path A a a'
postulate x : S1
postulate p : Path S1 base base
postulate v : Trunc A
postulate w : Trunc A
postulate B : U
postulate C : U
postulate g : C -> A
postulate h : C -> B
postulate c : C
"""

PO = "Pushout A B C g h"
PP = "{A, B, C, g, h}"
SUSP_LINE = "Susp (Path A a (q @ i))"

EQUATIONS: tuple[Equation, ...] = (
    # circle and spheres: boundaries and transport
    Equation("loop-0", "loop 0", "base", "S1"),
    Equation("loop-1", "loop 1", "base", "S1"),
    Equation("loop-join-1", r"loop (j \/ 1)", "base", "S1"),
    Equation("loop-beta", "(<i> loop i) @ j", "loop j", "S1"),
    Equation("path-endpoint", "p @ 0", "base", "S1"),
    Equation("trans-S1-face", "trans^i S1 (j=0) (loop j)", "loop j", "S1"),
    Equation("trans-S1-neutral", "trans^i S1 0F x", "x", "S1"),
    Equation("S2-face-i0", "loop 0 j", "base{S2}", "S2"),
    Equation("S2-face-j1", "loop i 1", "base{S2}", "S2"),
    Equation("S3-face-j0", "loop i 0 k", "base{S3}", "S3"),
    # torus
    Equation("tp-0", "tp 0", "b", "T"),
    Equation("tq-1", "tq 1", "b", "T"),
    Equation("surf-i0", "surf 0 j", "tp j", "T"),
    Equation("surf-i1", "surf 1 j", "tp j", "T"),
    Equation("surf-j0", "surf i 0", "tq i", "T"),
    Equation("surf-j1", "surf i 1", "tq i", "T"),
    Equation("f1-surf", "f1 (surf i j)", "(loop j, loop i)", "S1 * S1"),
    Equation("f2-f1-surf", "f2 (f1 (surf i j))", "surf i j", "T"),
    # folded torus: the square's sides are composites
    Equation("tpF-1", "tpF 1", "bF", "TF"),
    Equation("surfF-i0", "surfF 0 j", "hcomp^k TF [(j=0) -> bF, (j=1) -> tqF k] (tpF j)", "TF"),
    Equation("surfF-i1", "surfF 1 j", "hcomp^k TF [(j=0) -> bF, (j=1) -> tpF k] (tqF j)", "TF"),
    Equation("surfF-j0", "surfF i 0", "bF", "TF"),
    # suspension
    Equation("merid-0", "merid{A} a 0", "N{A}", "Susp A"),
    Equation("merid-1", "merid{A} a 1", "S{A}", "Susp A"),
    Equation("trans-Susp-N", f"trans^i ({SUSP_LINE}) 0F N{{Path A a a}}", "N{Path A a a'}", "Susp (Path A a a')"),
    Equation(
        "trans-Susp-merid",
        f"trans^i ({SUSP_LINE}) 0F (merid{{Path A a a}} (<l> a) j)",
        "merid{Path A a a'} (ctrans^i (Path A a (q @ i)) 0F (<l> a)) j",
        "Susp (Path A a a')",
    ),
    # truncation
    Equation("sq-0", "sq{A} v w 0", "v", "Trunc A"),
    Equation("sq-1", "sq{A} v w 1", "w", "Trunc A"),
    Equation(
        "trans-Trunc-inc",
        "trans^i (Trunc (Path A a (q @ i))) 0F (inc{Path A a a} (<l> a))",
        "inc{Path A a a'} (ctrans^i (Path A a (q @ i)) 0F (<l> a))",
        "Trunc (Path A a a')",
    ),
    Equation(
        "trans-Trunc-sq",
        "trans^i (Trunc A) (j=0) (sq{A} v w k)",
        "sq{A} (trans^i (Trunc A) (j=0) v) (trans^i (Trunc A) (j=0) w) k",
        "Trunc A",
    ),
    # pushouts
    Equation("push-0", f"push{PP} c 0", f"inl{PP} (g c)", PO),
    Equation("push-1", f"push{PP} c 1", f"inr{PP} (h c)", PO),
    Equation("trans-inl", f"trans^i ({PO}) (j=0) (inl{PP} a)", f"inl{PP} (ctrans^i A (j=0) a)", PO),
    Equation(
        "trans-push",
        f"trans^i ({PO}) 0F (push{PP} c j)",
        f"hcomp^i ({PO}) ["
        f"(j=0) -> (<l> squeeze^l ({PO}) 0F (inl{PP} (g (ctransFill^l C 0F c)))) @ -i, "
        f"(j=1) -> (<l> squeeze^l ({PO}) 0F (inr{PP} (h (ctransFill^l C 0F c)))) @ -i] "
        f"(push{PP} (ctrans^i C 0F c) j)",
        PO,
    ),
    # eliminators
    Equation("elim-base", "flip base", "base", "S1"),
    Equation("elim-loop", "flip (loop j)", "loop (-j)", "S1"),
    Equation("elim-merid", "susp2s1 (merid{S1} x j)", "loop j", "S1"),
    Equation("elim-push", "po2susp (push{S1, S1, S1, pt, pt} x j)", "merid{S1} x j", "Susp S1"),
    Equation(
        "elim-hcomp",
        "flip (hcomp^k S1 [(j=1) -> loop k] (loop j))",
        "comp^k S1 [(j=1) -> flip (loop k)] (flip (loop j))",
        "S1",
    ),
    # Kan operations and their fillers
    Equation("hcomp-top", r"hcomp^k S1 [1F -> loop (j /\ k)] base", "loop j", "S1"),
    Equation("comp-top", r"comp^k S1 [1F -> loop (j /\ k)] base", "loop j", "S1"),
    Equation("transFill-0", f"(<i> transFill^i ({SUSP_LINE}) 0F N{{Path A a a}}) @ 0", "N{Path A a a}", "Susp (Path A a a)"),
    Equation("transFill-1", "(<i> transFill^i S1 (j=0) (loop j)) @ 1", "trans^i S1 (j=0) (loop j)", "S1"),
    Equation(
        "squeeze-1",
        rf"(<i> squeeze^i ({SUSP_LINE}) 0F (merid{{Path A a (q @ i)}} (<l> q @ (i /\ l)) j)) @ 1",
        "merid{Path A a a'} (<l> q @ l) j",
        "Susp (Path A a a')",
    ),
)
