import pytest
from hypothesis import given, settings
from strategies import seeds

from hitkernel.dimalg import ONE, ZERO, DName, join, meet
from hitkernel.generate import PO2, S1, SUSP, Gen
from hitkernel.oracle import (
    LEG_BASE,
    LEG_ID,
    TInl,
    TInr,
    TN,
    TS,
    TBase,
    TLoop,
    THComp,
    TMerid,
    cube_map,
    functoriality_check,
    identity,
    interp_closed,
    pretree_counterexample,
    probe_maps,
    stability_check,
    tree_height,
    tree_restrict,
)
from hitkernel.parser import parse_expr
from hitkernel.suites import ORACLE_KINDS
from hitkernel.syntax import Con
from hitkernel.typecheck import Checker

NAMES = ("i", "j")
i, j = DName("i"), DName("j")


def elaborate(text, ty):
    ck = Checker()
    return ck.check(parse_expr(text), ty, ck.ctx(NAMES))


def test_constructor_trees():
    assert interp_closed(NAMES, Con("S1", (), "base"), S1) == TBase()
    u = interp_closed(NAMES, elaborate("merid{S1} (loop i) j", SUSP), SUSP)
    assert isinstance(u, TMerid) and u.a == TLoop(i)


def test_restriction_of_a_loop():
    u = TLoop(meet(i, j))
    assert tree_restrict(u, cube_map(("i",), {"i": i, "j": i})) == TLoop(i)
    assert tree_restrict(u, cube_map(("j",), {"i": ONE, "j": j})) == TLoop(j)
    # a vertex of the loop is the base point
    assert tree_restrict(u, cube_map(("j",), {"i": ZERO, "j": j})) == TBase()


def test_merid_restricts_to_its_poles():
    u = TMerid(TLoop(i), j)
    assert tree_restrict(u, cube_map(("i",), {"i": i, "j": ZERO})) == TN()
    assert tree_restrict(u, cube_map(("i",), {"i": i, "j": ONE})) == TS()


def test_probe_maps_include_identity_and_vertices():
    fs = probe_maps(NAMES)
    assert identity(NAMES) in fs
    assert sum(1 for f in fs if not f.dom) == 4


def test_hcomp_tree_is_stable_under_every_probe():
    t = elaborate("hcomp^k S1 [(i=0) -> loop j, (i=1) -> loop (j /\\ -k)] (loop j)", S1)
    u = interp_closed(NAMES, t, S1)
    assert isinstance(u, THComp) and tree_height(u) == 1
    for f in probe_maps(NAMES):
        assert stability_check(NAMES, t, S1, f).passed, f


def test_pretree_counterexample_is_not_functorial():
    bad, ns = pretree_counterexample()
    assert not functoriality_check(bad, ns, 1).passed


def test_genuine_hcomp_is_functorial():
    t = elaborate("hcomp^k S1 [(i=1) -> loop k] base", S1)
    assert functoriality_check(interp_closed(NAMES, t, S1), NAMES, 1).passed


def test_pushout_legs_are_modelled():
    t = elaborate("push{S1, S1, S1, \\c -> c, \\c -> c} (loop i) j", PO2)
    u = interp_closed(NAMES, t, PO2)
    for f in probe_maps(NAMES):
        assert stability_check(NAMES, t, PO2, f).passed
    assert functoriality_check(u, NAMES, 1, (LEG_ID, LEG_ID)).passed
    assert tree_restrict(u, cube_map(("i",), {"i": i, "j": ZERO}), (LEG_ID, LEG_BASE)) == TInl(TLoop(i))
    assert tree_restrict(u, cube_map(("i",), {"i": i, "j": ONE}), (LEG_ID, LEG_BASE)) == TInr(TBase())


@settings(max_examples=15)
@given(seeds)
def test_generated_terms_are_stable(seed):
    g = Gen.seeded(seed, allow_vars=False)
    t, ty, _ = g.typed_term(depth=3, ndims=2, kinds=ORACLE_KINDS)
    u = interp_closed(NAMES, t, ty)
    if tree_height(u) > 3:
        return
    for f in probe_maps(NAMES):
        v = stability_check(NAMES, t, ty, f, 2)
        assert v.passed, v.witness


@pytest.mark.parametrize("r", [i, join(i, j), meet(i, j)])
def test_restriction_along_identity_is_trivial(r):
    u = TLoop(r)
    assert tree_restrict(u, identity(NAMES), ()) == u
