import pytest
from hypothesis import given
from strategies import dims, raw_faces, seeds

from hitkernel.dimalg import DName, dim_eq, face_norm, join
from hitkernel.generate import Gen
from hitkernel.parser import ParseError, parse_dim, parse_expr, parse_face, parse_module, pretty, show_face_atom
from hitkernel.syntax import Con, HComp, PApp, PLam, Trans, alpha_eq


def surface(seed):
    # a generated core term, read back as the parser would see it
    t, _, _ = Gen.seeded(seed).typed_term(depth=4)
    return parse_expr(pretty(t), scope=("x",))


@given(seeds)
def test_round_trip_law(seed):
    u = surface(seed)
    assert alpha_eq(parse_expr(pretty(u), scope=("x",)), u)


@given(seeds)
def test_printing_is_stable(seed):
    s = pretty(surface(seed))
    assert pretty(parse_expr(s, scope=("x",))) == s


def test_bare_base_is_resolved_by_elaboration():
    assert parse_expr("base").hit is None
    assert parse_expr("base{S2}").hit == "S2"


@given(dims)
def test_dim_round_trip(r):
    assert dim_eq(parse_dim(_show_dim(r)), r)


def _show_dim(r):
    # print through a path application and strip the head
    return pretty(PApp(parse_expr("p", scope=("p",)), r)).split(" @ ", 1)[1]


@given(raw_faces)
def test_face_round_trip(p):
    phi = face_norm(p)
    assert parse_face(show_face_atom(phi)) == phi


def test_constructor_dims_parse():
    t = parse_expr("loop (i \\/ j)")
    assert isinstance(t, Con) and t.con == "loop"
    assert dim_eq(t.dims[0], join(DName("i"), DName("j")))


def test_binders_and_kan_operations():
    assert isinstance(parse_expr("<i> loop i"), PLam)
    assert isinstance(parse_expr("hcomp^k S1 [(j=0) -> base] base"), HComp)
    assert isinstance(parse_expr("trans^i S1 0F base"), Trans)


def test_module_definitions_and_postulates():
    mod = parse_module("postulate A : U\nid : A -> A = \\x -> x\n")
    assert [d.name for d in mod.defs] == ["A", "id"]
    assert mod.defs[0].is_postulate and not mod.defs[1].is_postulate


@pytest.mark.parametrize(
    "text, col, wanted",
    [
        ("loop (i /\\ ", 11, "dimension name"),
        ("loop (i /\\ j", 13, ")"),
        ("\\x -> ", 6, "identifier"),
        ("trans^i S1 ((i=0) \\/ ) base", 22, "0F"),
        ("base )", 6, "end of input"),
    ],
)
def test_errors_point_at_the_furthest_failure(text, col, wanted):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    e = info.value
    assert (e.line, e.col) == (1, col)
    assert wanted in e.expected


def test_error_line_numbers_in_modules():
    with pytest.raises(ParseError) as info:
        parse_module("postulate A : U\n\nf : A -> = A\n")
    assert info.value.line == 3
