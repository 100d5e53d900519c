import pytest
from hypothesis import given
from strategies import seeds

from hitkernel.corpus import CONTEXT, EQUATIONS
from hitkernel.dimalg import FACE_BOT, FACE_TOP, ONE, DName, conj_subst
from hitkernel.eval import GENERIC_TRANS, UnsupportedUniverseKan, normalize, whnf
from hitkernel.generate import Gen, comp_instance, scope_with_vars
from hitkernel.parser import pretty
from hitkernel.suites import check_equation, generic_flag_suite, load_context, transport_suite
from hitkernel.syntax import Con, HComp, HitType, Trans, U, alpha_eq, comp, subst


@pytest.fixture(scope="module")
def env():
    return load_context(CONTEXT + "postulate z : S1 * S1\npostulate f : S1 -> S1\n")


def same(env, lhs, rhs, ty):
    ck, names = env
    return check_equation(ck, names, lhs, rhs, ty)


@pytest.mark.parametrize("eq", EQUATIONS, ids=lambda e: e.name)
def test_corpus_equation(env, eq):
    assert same(env, eq.lhs, eq.rhs, eq.type) is None


@pytest.mark.parametrize(
    "lhs, rhs, ty",
    [
        ("flip (loop i)", "loop (-i)", "S1"),
        ("flip (flip x)", "flip (flip x)", "S1"),
        ("f2 (f1 (surf i j))", "surf i j", "T"),
        ("f1 (f2 z)", "f1 (f2 z)", "S1 * S1"),
        ("susp2s1 (merid base i)", "loop i", "S1"),
        ("po2susp (push base i)", "merid base i", "Susp S1"),
        ("swap2 (loop i j)", "loop j i", "S2"),
    ],
)
def test_eliminators_compute(env, lhs, rhs, ty):
    assert same(env, lhs, rhs, ty) is None


def test_function_eta(env):
    assert same(env, "f", "\\y -> f y", "S1 -> S1") is None


def test_pair_eta(env):
    assert same(env, "z", "(z.1, z.2)", "S1 * S1") is None


def test_path_eta(env):
    assert same(env, "p", "<i> p @ i", "Path S1 base base") is None


def test_distinct_points_differ(env):
    assert same(env, "loop i", "base", "S1") is not None
    assert same(env, "x", "flip x", "S1") is not None


def test_whnf_reduces_hcomp_on_top_face():
    base = Con("S1", (), "base")
    t = HComp("k", HitType("S1"), ((FACE_TOP, Con("S1", (), "loop", (), (DName("k"),))),), base)
    assert whnf(t) == base


def test_universe_transport_is_rejected():
    with pytest.raises(UnsupportedUniverseKan):
        whnf(Trans("i", U(), FACE_BOT, HitType("S1")))


@given(seeds)
def test_normalization_commutes_with_dim_subst(seed):
    g = Gen.seeded(seed)
    scope = scope_with_vars()
    t, ty, dims = g.typed_term(depth=4, ndims=3)
    s = g.dim_subst(dims)
    ty_s = subst(ty, None, s)
    a = normalize(subst(t, None, s), ty_s, scope)
    b = normalize(subst(normalize(t, ty, scope), None, s), ty_s, scope)
    assert alpha_eq(a, b), pretty(t)


@given(seeds)
def test_normalization_is_idempotent(seed):
    scope = scope_with_vars()
    t, ty, _ = Gen.seeded(seed).typed_term(depth=4, ndims=3)
    n = normalize(t, ty, scope)
    assert alpha_eq(normalize(n, ty, scope), n)


@given(seeds)
def test_comp_restricts_to_its_side(seed):
    i, line, phi, w, u0 = comp_instance(Gen.seeded(seed))
    t = comp(i, line, ((phi, w),), u0)
    ty1 = subst(line, None, {i: ONE})
    scope = scope_with_vars()
    for c in phi.conjs:
        s = conj_subst(c)
        a = normalize(subst(t, None, s), subst(ty1, None, s), scope)
        b = normalize(subst(w, None, {**s, i: ONE}), subst(ty1, None, s), scope)
        assert alpha_eq(a, b)


def test_generic_transport_agrees_with_direct_rules():
    res = transport_suite(20, seed=7)
    assert res.ok, res.failures


def test_generic_flag_keeps_stability():
    assert GENERIC_TRANS.get() is False
    res = generic_flag_suite(30, seed=11)
    assert res.ok, res.failures
    assert GENERIC_TRANS.get() is False
