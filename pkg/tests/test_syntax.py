import pytest
from hypothesis import given
from strategies import seeds

from hitkernel.dimalg import FACE_BOT, FACE_TOP, DName, face_atom, meet
from hitkernel.generate import Gen
from hitkernel.syntax import (
    BUILTINS,
    App,
    Con,
    Constructor,
    HComp,
    HITDecl,
    HitType,
    Lam,
    PApp,
    PathP,
    PLam,
    SchemaViolation,
    Var,
    alpha_eq,
    comp,
    free_dims,
    free_vars,
    hit_validate,
    subst,
    system_face,
)

S1 = HitType("S1")
BASE = Con("S1", (), "base")


def loop(r):
    return Con("S1", (), "loop", (), (r,))


def test_term_subst_avoids_capture():
    t = Lam("y", App(Var("x"), Var("y")))
    got = subst(t, {"x": Var("y")})
    assert got.name != "y"
    assert alpha_eq(got, Lam("z", App(Var("y"), Var("z"))))


def test_dim_subst_avoids_capture():
    t = PLam("i", PApp(Var("p"), meet(DName("i"), DName("j"))))
    got = subst(t, None, {"j": DName("i")})
    assert got.dim != "i"
    assert free_dims(got) == {"i"}


def test_pathp_binds_dim_in_type_only():
    t = PathP("i", HitType("Susp", (PathP("_", S1, BASE, loop(DName("i"))),)), Var("a"), Var("b"))
    assert free_dims(t) == frozenset()
    assert free_vars(t) == {"a", "b"}


def test_alpha_eq_renames_binders():
    assert alpha_eq(PLam("i", loop(DName("i"))), PLam("j", loop(DName("j"))))
    assert not alpha_eq(PLam("i", loop(DName("i"))), PLam("j", loop(DName("k"))))


def test_alpha_eq_ignores_system_order():
    s0, s1 = (face_atom("j", 0), BASE), (face_atom("j", 1), loop(DName("k")))
    a = HComp("k", S1, (s0, s1), BASE)
    b = HComp("k", S1, (s1, s0), BASE)
    assert alpha_eq(a, b)
    assert not alpha_eq(a, HComp("k", S1, (s0, s0), BASE))


def test_comp_is_derived():
    t = comp("i", S1, [(face_atom("j", 0), BASE)], BASE)
    assert isinstance(t, HComp)


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtins_satisfy_schema(name):
    assert hit_validate(BUILTINS[name])


def test_boundary_on_top_face_is_rejected():
    d = HITDecl("D", (), (Constructor("p", (), ("i",), ((FACE_TOP, Con("D", (), "p", (), (DName("i"),))),)),))
    with pytest.raises(SchemaViolation):
        hit_validate(d)


def test_boundary_face_outside_dims_is_rejected():
    pt = Con("D", (), "pt")
    d = HITDecl("D", (), (Constructor("pt", (), ()), Constructor("p", (), ("i",), ((face_atom("j", 0), pt),))))
    with pytest.raises(SchemaViolation, match="outside"):
        hit_validate(d)


def test_recursive_argument_must_be_positive():
    neg = HITDecl("N", (), (Constructor("lam", (("f", App(Var("N"), Var("N"))),), ()),))
    bad = HITDecl("N", (), (Constructor("lam", (("f", PathP("_", HitType("N"), Var("a"), Var("a"))),), ()),))
    with pytest.raises(SchemaViolation):
        hit_validate(neg)
    with pytest.raises(SchemaViolation):
        hit_validate(bad)


def test_empty_system_face_is_bottom():
    assert system_face(()) == FACE_BOT


@given(seeds)
def test_identity_dim_subst_is_alpha_eq(seed):
    g = Gen.seeded(seed)
    t, _, dims = g.typed_term(depth=3)
    assert alpha_eq(subst(t, None, {n: DName(n) for n in dims}), t)


@given(seeds)
def test_alpha_eq_is_reflexive_on_generated_terms(seed):
    t, ty, _ = Gen.seeded(seed).typed_term(depth=3)
    assert alpha_eq(t, t) and alpha_eq(ty, ty)
