import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realforms.cli import fixture_names, load_fixture
from realforms.exact_lattice import RationalLattice, RationalVector, identity
from realforms.packet_param import (
    DualParameter,
    OrthogonalityClauseError,
    OverlatticeClauseError,
    ParameterError,
    SingularityClauseError,
    NoncompactClauseError,
    build_dL,
    chain_isomorphism,
    compare_packets,
    group_one,
    group_two,
    maximally_split_chain,
    shelstad_transform,
    step_monomorphism,
    strong_form_of_character,
    transport_character,
    validate_parameter,
)
from realforms.root_datum import REAL, BasedRootDatum, InvolutionState, cartan_type
from realforms.sampling import random_tempered_parameter

PARAMETER_FIXTURES = [n for n in fixture_names() if not n.startswith("torus")]
C2_ADJ = BasedRootDatum(2, ((1, 0), (0, 1)), ((2, -1), (-2, 2)))


def param(name):
    return load_fixture(name).parameter()


def a1(sc=True, nc=True, lam=0, delta=(0,), lattice=None):
    d = BasedRootDatum(1, ((2,),), ((1,),)) if sc else BasedRootDatum(1, ((1,),), ((2,),))
    state = InvolutionState(d, ((1,),), frozenset({0}) if nc else frozenset())
    return DualParameter(state, RationalVector((lam,), 1), delta, lattice)


def test_validate_accepts_a1():
    assert validate_parameter(a1()).delta_phi == (0,)


def test_validate_rejects_regular_root():
    with pytest.raises(SingularityClauseError):
        validate_parameter(a1(lam=1))


def test_validate_rejects_compact_root():
    with pytest.raises(NoncompactClauseError):
        validate_parameter(a1(nc=False))


def test_validate_rejects_non_orthogonal_pair():
    a2 = BasedRootDatum(2, *cartan_type("A", 2))
    state = InvolutionState(a2, identity(2), frozenset({0, 1}))
    with pytest.raises(OrthogonalityClauseError):
        validate_parameter(DualParameter(state, RationalVector.zero(2), (0, 1)))


def test_validate_rejects_noncentral_overlattice():
    L = RationalLattice.from_generators([[Fraction(1, 2)]], 1)
    with pytest.raises(OverlatticeClauseError):
        validate_parameter(a1(sc=True, lattice=L))


def test_build_dL_examples():
    assert build_dL(a1()) == (0, 1)
    state = InvolutionState(C2_ADJ, identity(2), frozenset())
    assert build_dL(DualParameter(state, RationalVector((1, 1), 1))) == ()
    assert build_dL(DualParameter(state, RationalVector((0, 1), 1))) == (0, 4)
    assert len(build_dL(DualParameter(state, RationalVector.zero(2)))) == 8


def test_shelstad_transform_examples():
    sh = shelstad_transform(a1())
    assert sh.state.theta == ((-1,),) and set(sh.m1_roots) == {0, 1}
    empty = shelstad_transform(a1(delta=()))
    assert empty.state.theta == ((1,),) and empty.m1_roots == ()
    p = param("a1xa1")
    a = shelstad_transform(p, (0, 1)).state
    b = shelstad_transform(p, (1, 0)).state
    assert a.theta == b.theta == ((-1, 0), (0, -1)) and a.noncompact == b.noncompact


def test_maximally_split_chain_examples():
    assert len(maximally_split_chain(a1())) == 0
    chain = maximally_split_chain(a1(delta=()))
    assert chain.roots == (0,) and chain.final.classify(0) == REAL
    assert len(maximally_split_chain(param("c2_singular"))) == 1


def test_group_examples():
    ad = group_two(param("a1_adjoint"))
    assert str(ad.forms.group) == "Z/2" and not any(ad.generator_classes[0])
    assert len(ad.admissible) == 2
    sc = group_two(param("a1_sc"))
    assert str(sc.forms.group) == "Z/2" and len(sc.admissible) == 1
    p = DualParameter(InvolutionState(BasedRootDatum(1, ((1,),), ((2,),)), ((-1,),), frozenset()), RationalVector((1,), 1))
    one = group_one(p)
    assert one.generators == () and len(one.admissible) == one.forms.group.order


def test_step_monomorphism_a1():
    p = a1(delta=())
    hom = step_monomorphism(p, p.state, 0)
    assert hom.domain.order == 1 and hom.codomain.order == 1
    assert hom(()) == ()


def test_chain_isomorphism_examples():
    iso = chain_isomorphism(a1(delta=()))
    assert iso.hom.is_bijective()
    ad = chain_isomorphism(param("a1_adjoint"))
    assert str(ad.hom.domain) == "Z/2" and ad.hom.is_bijective()
    c2 = chain_isomorphism(param("c2_singular"))
    assert c2.hom.is_bijective()


def test_transport_character_examples():
    iso = chain_isomorphism(param("a1_adjoint"))
    assert transport_character(iso, (0,)) == (0,)
    assert transport_character(iso, (1,)) == (1,)
    sc = chain_isomorphism(param("a1_sc"))
    with pytest.raises(ParameterError):
        transport_character(sc, (1,))


def test_strong_form_examples():
    p = param("a1_adjoint")
    two = group_two(p)
    assert strong_form_of_character(p, two, (0,)).describe() == "delta_q"
    nontrivial = strong_form_of_character(p, two, (1,))
    assert nontrivial.lam1.pair((1,)) % 2 == 1 or nontrivial.lam1.denominator > 1
    assert nontrivial.describe() != "delta_q"


def test_compare_examples():
    r = compare_packets(param("a1_adjoint"))
    assert r.passed and len(r.rows) == 2
    r = compare_packets(param("a1_sc"))
    assert r.passed and len(r.rows) == 1
    torus = DualParameter(InvolutionState(BasedRootDatum(1, (), ()), ((-1,),), frozenset()), RationalVector.zero(1))
    r = compare_packets(torus)
    assert r.passed and len(r.rows) == r.two.forms.group.order == 2


def test_compare_reports_size_mismatch():
    # same datum and grading, but delta_phi omits the required long root
    state = InvolutionState(C2_ADJ, identity(2), frozenset({1, 2}))
    assert compare_packets(DualParameter(state, RationalVector.zero(2), (2,))).passed
    r = compare_packets(DualParameter(state, RationalVector.zero(2), ()))
    assert not r.passed and not r.rows and "differ" in r.messages[0]


@pytest.mark.parametrize("name", PARAMETER_FIXTURES)
def test_fixture_rows_pass(name):
    r = compare_packets(param(name))
    assert r.passed
    for row in r.rows:
        assert row.same_class and row.orthogonal and row.reflection_fixed


@pytest.mark.parametrize("name", PARAMETER_FIXTURES)
def test_admissible_points_pair_trivially(name):
    p = param(name)
    iso = chain_isomorphism(p)
    d = p.datum
    for tau in iso.one.admissible:
        lam = iso.one.forms.representative(tau)
        for b in iso.chain.roots:
            assert lam.pair(d.coroots[b]) % 2 == 0


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_random_parameters_have_equal_quotients(seed):
    p = random_tempered_parameter(random.Random(seed), 3)
    iso = chain_isomorphism(p)
    assert iso.two.quotient.quotient.order == iso.one.quotient.quotient.order
    # transport is a bijection of admissible sets
    images = {transport_character(iso, t) for t in iso.two.admissible}
    assert len(images) == len(iso.two.admissible) == len(iso.one.admissible)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_verdict_independent_of_chain(seed, choice_seed):
    p = random_tempered_parameter(random.Random(seed), 3)
    rng = random.Random(choice_seed)
    base = compare_packets(p)
    other = compare_packets(p, lambda cands: rng.choice(sorted(cands)))
    assert base.passed and other.passed
    assert base.one.quotient.quotient == other.one.quotient.quotient
    assert len(base.rows) == len(other.rows)
