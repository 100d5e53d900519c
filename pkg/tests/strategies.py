"""Hypothesis strategies over interval terms, faces and substitutions."""

from hypothesis import strategies as st

from hitkernel.dimalg import DJoin, DMeet, DName, DNeg, FAnd, FAtom, FConst, FOr, ONE, ZERO

NAMES = ("i", "j", "k", "l")

names = st.sampled_from(NAMES)

dims = st.recursive(
    st.one_of(st.just(ZERO), st.just(ONE), names.map(DName)),
    lambda sub: st.one_of(
        sub.map(DNeg),
        st.builds(DMeet, sub, sub),
        st.builds(DJoin, sub, sub),
    ),
    max_leaves=8,
)

raw_faces = st.recursive(
    st.one_of(st.builds(FAtom, dims, st.integers(0, 1)), st.booleans().map(FConst)),
    lambda sub: st.one_of(st.builds(FAnd, sub, sub), st.builds(FOr, sub, sub)),
    max_leaves=5,
)

substs = st.dictionaries(names, dims, max_size=3)

seeds = st.integers(0, 2**31 - 1)
