from hypothesis import given
from strategies import dims, raw_faces, substs

from hitkernel.dimalg import (
    FACE_BOT,
    FACE_TOP,
    DJoin,
    DMeet,
    DName,
    DNeg,
    FAnd,
    FAtom,
    FOr,
    ONE,
    ZERO,
    dim_canon,
    dim_eq,
    dim_names,
    dim_subst,
    face_and,
    face_atom,
    face_entails,
    face_norm,
    face_of_dim,
    face_or,
    face_subst,
    join,
    meet,
    neg,
)
from hitkernel.reference import face_equiv, rewrite_eq

i, j, k = DName("i"), DName("j"), DName("k")


def f(name, bit):
    return face_atom(name, bit)


# substitution


def test_meet_unit():
    assert dim_eq(dim_subst(meet(i, j), {"i": ONE}), j)


def test_neg_constant():
    assert dim_subst(neg(i), {"i": ZERO}) == ONE


def test_join_diagonal_is_idempotent():
    assert dim_eq(dim_subst(join(i, j), {"i": j}), j)


# equality


def test_involution():
    assert dim_eq(DNeg(DNeg(i)), i)


def test_no_excluded_middle():
    # i /\ -i is not 0 in a De Morgan algebra
    assert not dim_eq(DMeet(i, DNeg(i)), ZERO)


def test_de_morgan_law():
    assert dim_eq(DNeg(DMeet(i, j)), DJoin(DNeg(i), DNeg(j)))


def test_smart_constructors_collapse():
    assert neg(ZERO) is ONE and neg(ONE) is ZERO and neg(neg(i)) == i


@given(dims, dims)
def test_dim_eq_matches_rewriting(a, b):
    assert dim_eq(a, b) == rewrite_eq(a, b)


@given(dims, dims, substs)
def test_dim_eq_is_a_congruence(a, b, s):
    if dim_eq(a, b):
        assert dim_eq(dim_subst(a, s), dim_subst(b, s))


@given(dims)
def test_canon_is_equal_and_idempotent(a):
    c = dim_canon(a)
    assert dim_eq(a, c)
    assert dim_canon(c) == c


@given(dims)
def test_names_shrink(a):
    assert dim_names(dim_canon(a)) <= dim_names(a)


# faces


def test_contradiction_is_bottom():
    assert face_norm(FAnd(FAtom(i, 0), FAtom(i, 1))) == FACE_BOT


def test_absorption():
    got = face_norm(FAnd(FAtom(i, 1), FOr(FAtom(i, 1), FAtom(j, 0))))
    assert got == f("i", 1)


def test_distribute_and_drop_inconsistent():
    got = face_norm(FAnd(FOr(FAtom(i, 0), FAtom(j, 1)), FAtom(j, 0)))
    assert got == face_and(f("i", 0), f("j", 0))


def test_entailment_examples():
    assert face_entails(face_and(f("i", 0), f("j", 1)), f("i", 0))
    assert face_entails(FACE_BOT, f("k", 1))
    assert not face_entails(face_or(f("i", 0), f("i", 1)), f("i", 0))


def test_endpoints_do_not_cover_the_interval():
    assert face_or(f("i", 0), f("i", 1)) != FACE_TOP


def test_face_of_dim_examples():
    assert face_of_dim(i) == f("i", 1)
    assert face_of_dim(neg(i)) == f("i", 0)
    assert face_of_dim(join(i, neg(j))) == face_or(f("i", 1), f("j", 0))


def test_face_subst_examples():
    assert face_subst(f("i", 1), {"i": ONE}) == FACE_TOP
    assert face_subst(f("i", 1), {"i": meet(j, k)}) == face_and(f("j", 1), f("k", 1))
    assert face_subst(face_or(f("i", 0), f("j", 1)), {"i": ONE}) == f("j", 1)


@given(raw_faces)
def test_norm_idempotent(p):
    n = face_norm(p)
    assert face_norm(n) == n


@given(raw_faces, raw_faces)
def test_canonical_forms_are_unique(p, q):
    assert (repr(face_norm(p)) == repr(face_norm(q))) == face_equiv(p, q)


@given(raw_faces)
def test_canonical_invariants(p):
    for c in face_norm(p).conjs:
        names = [n for n, _ in c]
        assert len(names) == len(set(names))  # no (i=0) /\ (i=1)
    conjs = [set(c) for c in face_norm(p).conjs]
    assert not any(a < b for a in conjs for b in conjs)


@given(dims, dims)
def test_face_of_dim_is_a_lattice_map(r, s):
    assert face_of_dim(meet(r, s)) == face_and(face_of_dim(r), face_of_dim(s))
    assert face_of_dim(join(r, s)) == face_or(face_of_dim(r), face_of_dim(s))


@given(dims)
def test_r_and_not_r_faces_are_disjoint(r):
    assert face_entails(face_and(face_of_dim(r), face_of_dim(neg(r))), FACE_BOT)


@given(raw_faces, substs, substs)
def test_face_subst_composes(p, s, t):
    phi = face_norm(p)
    composed = {n: dim_subst(r, t) for n, r in s.items()}
    composed.update({n: r for n, r in t.items() if n not in s})
    assert face_subst(phi, composed) == face_subst(face_subst(phi, s), t)
