import pytest
from hypothesis import given
from strategies import seeds

from hitkernel.corpus import prelude_text
from hitkernel.generate import Gen, scope_with_vars
from hitkernel.parser import parse_expr, parse_module
from hitkernel.suites import negative_cases
from hitkernel.syntax import BUILTINS, PathP
from hitkernel.typecheck import Checker, Ctx, TypeCheckError, check_module, validate_decl


def check(text):
    return check_module(parse_module(text, "t.chit"))


def test_prelude_checks():
    ck = check(prelude_text())
    for name in ("f1", "f2", "flip", "double", "swap2", "po2susp", "transConst"):
        assert name in ck.globals.types


@pytest.mark.parametrize("case", negative_cases(), ids=lambda c: c[0])
def test_rejected_with_designated_kind(case):
    _, kind, run = case
    with pytest.raises(TypeCheckError) as info:
        run()
    assert info.value.kind == kind


def test_error_render_format():
    with pytest.raises(TypeCheckError) as info:
        check("bad : S1 = loop")
    e = info.value
    line, col = e.pos
    assert e.render("f.chit").startswith(f"f.chit:{line}:{col}: {e.kind}: expected ")
    assert " got " in e.render()


def test_boundary_error_names_the_face():
    with pytest.raises(TypeCheckError) as info:
        check("m : (A : U) -> A -> Path (Susp A) N{A} N{A} = \\A a -> <i> merid{A} a i")
    e = info.value
    assert e.kind == "BoundaryMismatch"
    assert e.expected != e.actual


def test_unbound_name_is_a_scope_error():
    with pytest.raises(TypeCheckError) as info:
        check("bad : S1 = y")
    assert info.value.kind == "ScopeError"


def test_path_abstraction_is_inferable():
    ck = Checker()
    _, ty = ck.infer(parse_expr("<i> loop i"), ck.ctx())
    assert isinstance(ty, PathP)
    _, ty = ck.infer(parse_expr("(<i> loop i) @ j"), ck.ctx({"j"}))
    assert ty == BUILTINS["S1"].self_type()


def test_elim_must_respect_boundaries():
    ok = "good : S1 -> S1 = \\x -> elim [_ . S1] x [base -> base, loop i -> loop 0]\n"
    assert "good" in check(ok).globals.types
    # surf i j sits over tp j at i=0, which is sent to loop j, not base
    with pytest.raises(TypeCheckError) as info:
        check("bad : T -> S1 = \\x -> elim [_ . S1] x [b -> base, tp i -> loop i, tq i -> base, surf i j -> base]")
    assert info.value.kind == "BoundaryMismatch"


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtin_declarations_validate(name):
    assert validate_decl(BUILTINS[name])


@given(seeds)
def test_generated_terms_typecheck(seed):
    t, ty, dims = Gen.seeded(seed).typed_term(depth=4, ndims=3)
    Checker().check(t, ty, Ctx(scope_with_vars(), dims))
