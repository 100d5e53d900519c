import random

from hypothesis import given
from strategies import seeds

from hitkernel.dimalg import dim_eq, face_norm
from hitkernel.generate import (
    DIM_POOL,
    Gen,
    comp_instance,
    dim_variant,
    face_variant,
    pushout_trans_instance,
    raw_dim,
    raw_face,
    seed_from_env,
)
from hitkernel.parser import pretty
from hitkernel.reference import face_equiv
from hitkernel.syntax import alpha_eq, free_dims


def test_same_seed_same_terms():
    a = [pretty(Gen.seeded(5).typed_term()[0]) for _ in range(3)]
    b = [pretty(Gen.seeded(5).typed_term()[0]) for _ in range(3)]
    assert a == b


def test_seed_from_env(monkeypatch):
    monkeypatch.setenv("KERNEL_SEED", "42")
    assert seed_from_env() == 42
    monkeypatch.delenv("KERNEL_SEED")
    assert seed_from_env(7) == 7


@given(seeds)
def test_terms_stay_in_the_dimension_pool(seed):
    t, _, dims = Gen.seeded(seed).typed_term(ndims=3)
    assert free_dims(t) <= set(dims) <= set(DIM_POOL)


@given(seeds)
def test_dim_variants_are_equal(seed):
    rng = random.Random(seed)
    r = raw_dim(rng, DIM_POOL)
    assert dim_eq(r, dim_variant(rng, r, DIM_POOL))


@given(seeds)
def test_face_variants_are_equivalent(seed):
    rng = random.Random(seed)
    p = raw_face(rng, DIM_POOL)
    q = face_variant(rng, p, DIM_POOL)
    assert face_equiv(p, q) and face_norm(p) == face_norm(q)


@given(seeds)
def test_comp_instances_keep_the_face_off_the_direction(seed):
    i, _, phi, _, _ = comp_instance(Gen.seeded(seed))
    assert i not in {n for c in phi.conjs for n, _ in c}


@given(seeds)
def test_pushout_instances_are_deterministic(seed):
    a = pushout_trans_instance(Gen.seeded(seed))
    b = pushout_trans_instance(Gen.seeded(seed))
    assert a[0] == b[0] and a[2] == b[2] and alpha_eq(a[3], b[3])
