import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realforms.exact_lattice import identity, matmul, matvec, neg, transpose
from realforms.root_datum import (
    COMPLEX,
    IMAGINARY,
    REAL,
    BasedRootDatum,
    InvolutionState,
    RootDatumError,
    alpha_minus_one,
    cartan_type,
    cayley_imaginary,
    cayley_real,
    extend_grading,
    root_subsystem,
    weyl_reflection,
)
from realforms.sampling import SIMPLE_TYPES, random_datum
from realforms.torus_forms import TorusPoint

A1_SC = BasedRootDatum(1, ((2,),), ((1,),))
A1_AD = BasedRootDatum(1, ((1,),), ((2,),))
A1A1 = BasedRootDatum(2, ((1, 0), (0, 1)), ((2, 0), (0, 2)))
SWAP = ((0, 1), (1, 0))


def test_root_counts():
    counts = {"A": lambda n: n * (n + 1), "B": lambda n: 2 * n * n, "C": lambda n: 2 * n * n, "D": lambda n: 2 * n * (n - 1)}
    for name, n in SIMPLE_TYPES:
        d = BasedRootDatum(n, *cartan_type(name, n))
        expected = 12 if name == "G" else counts[name](n)
        assert len(d.roots) == expected


def test_bad_cartan_matrix():
    with pytest.raises(RootDatumError):
        BasedRootDatum(1, ((1,),), ((1,),))


def test_classify_examples():
    st1 = InvolutionState(A1A1, identity(2), frozenset())
    assert all(st1.classify(i) == IMAGINARY for i in range(4))
    st2 = InvolutionState(A1A1, neg(identity(2)), frozenset())
    assert all(st2.classify(i) == REAL for i in range(4))
    st3 = InvolutionState(A1A1, SWAP, frozenset())
    assert st3.classify(0) == COMPLEX and st3.classify(1) == COMPLEX


def test_classify_unknown_root():
    with pytest.raises(RootDatumError):
        InvolutionState(A1_SC, ((1,),), frozenset()).classify(7)


def test_grading_only_on_imaginary_roots():
    with pytest.raises(RootDatumError):
        InvolutionState(A1A1, SWAP, frozenset({0}))


def test_cayley_imaginary_rank_one():
    new, step = cayley_imaginary(InvolutionState(A1_SC, ((1,),), frozenset({0})), 0)
    assert new.theta == ((-1,),) and new.classify(0) == REAL
    assert step.kind == IMAGINARY and step.point == TorusPoint.of(["1/2"])


def test_cayley_imaginary_rejects_compact():
    with pytest.raises(RootDatumError):
        cayley_imaginary(InvolutionState(A1_SC, ((1,),), frozenset()), 0)


def test_cayley_orthogonal_keeps_grading():
    s = InvolutionState(A1A1, identity(2), frozenset({0, 1}))
    new, _ = cayley_imaginary(s, 0)
    assert new.classify(1) == IMAGINARY and 1 in new.noncompact
    s = InvolutionState(A1A1, identity(2), frozenset({0}))
    new, _ = cayley_imaginary(s, 0)
    assert 1 not in new.noncompact


def test_cayley_real_examples():
    s = InvolutionState(A1_SC, ((-1,),), frozenset())
    new, step = cayley_real(s, 0)
    assert new.theta == ((1,),) and 0 in new.noncompact and step.kind == REAL
    back, _ = cayley_imaginary(new, 0)
    assert back.theta == s.theta


def test_cayley_real_rejects_complex():
    with pytest.raises(RootDatumError):
        cayley_real(InvolutionState(A1A1, SWAP, frozenset()), 0)


def test_alpha_minus_one():
    assert alpha_minus_one(A1_SC, 0).order == 2
    assert alpha_minus_one(A1_AD, 0).is_identity()


def test_weyl_reflection_examples():
    a2 = BasedRootDatum(2, *cartan_type("A", 2))
    s = weyl_reflection(a2, 0)
    assert matvec(s, a2.roots[0]) == a2.roots[a2.negative(0)]
    assert matmul(s, s) == identity(2)
    a12 = tuple(x + y for x, y in zip(a2.roots[0], a2.roots[1]))
    assert matvec(s, a2.roots[1]) == a12


def test_root_subsystem():
    d = BasedRootDatum(2, *cartan_type("C", 2))
    long_roots = root_subsystem(d, lambda r: sum(x * x for x in r.coroot) == 1)
    assert len(long_roots) == 4


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_cayley_laws_on_random_data(seed):
    rng = random.Random(seed)
    d = random_datum(rng, 4)
    # grade the simple roots at random and extend multiplicatively
    cons = {i: rng.random() < 0.5 for i in range(d.semisimple_rank)}
    nc = extend_grading(d, identity(d.rank), cons)
    s = InvolutionState(d, identity(d.rank), nc)
    for _ in range(3):
        cands = [i for i in s.noncompact if i < d.num_positive and s.classify(i) == IMAGINARY]
        if not cands:
            break
        a = rng.choice(sorted(cands))
        before = set(s.real())
        new, _ = cayley_imaginary(s, a)
        assert matmul(new.theta, new.theta) == identity(d.rank)
        assert new.classify(a) == REAL
        assert before | {a, d.negative(a)} <= set(new.real())
        back, _ = cayley_real(new, a)
        assert back.theta == s.theta
        s = new


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_alpha_minus_one_fixed(seed):
    d = random_datum(random.Random(seed), 4)
    thetas = [identity(d.rank)] + [weyl_reflection(d, a) for a in range(d.num_positive)]
    for theta in thetas:
        state = InvolutionState(d, theta, frozenset())
        for i in state.real() + state.imaginary():
            p = alpha_minus_one(d, i)
            assert TorusPoint(p.v.transform(transpose(theta))) == p
