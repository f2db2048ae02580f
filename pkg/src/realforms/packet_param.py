"""Packet index sets on the maximally split torus and on the Shelstad torus.

A :class:`DualParameter` lives on the dual side: an involution state on a
based root datum, an infinitesimal character ``lam`` in cocharacter
coordinates ``Y``, a strongly orthogonal set of singular noncompact imaginary
roots, and an overlattice ``L`` of the group-side cocharacters describing the
central subgroup ``J``.

Group-side cocharacters are identified with dual-side characters ``X`` through
``zeta^{-T}``; internally everything is computed in ``X`` coordinates, where
the Galois action is the dual involution itself.  Characters of component
groups are stored as elements of ``Q_J = L^{-sigma} / (1 - sigma) X`` via the
perfect pairing ``<v, lam1> mod 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exact_lattice import (
    GroupHom,
    IntMatrix,
    IntVector,
    LatticeError,
    RationalLattice,
    RationalVector,
    SubgroupQuotient,
    as_matrix,
    det,
    identity,
    matvec,
    quotient_by,
    solve_integer,
    sub,
    transpose,
    unimodular_inverse,
)
from .root_datum import (
    IMAGINARY,
    BasedRootDatum,
    CayleyStep,
    InvolutionState,
    RootDatumError,
    cayley_imaginary,
    real_roots,
    weyl_reflection,
)
from .torus_forms import (
    CoverComponentGroup,
    TorusWithInvolution,
    cover_component_group,
)


class ParameterError(ValueError):
    """A parameter clause is violated."""


class DatumClauseError(ParameterError):
    pass


class LambdaClauseError(ParameterError):
    pass


class ImaginaryClauseError(ParameterError):
    pass


class NoncompactClauseError(ParameterError):
    pass


class SingularityClauseError(ParameterError):
    pass


class OrthogonalityClauseError(ParameterError):
    """The root set is not of type A1 x ... x A1 (pairwise strongly orthogonal)."""


class OverlatticeClauseError(ParameterError):
    pass


class ZetaClauseError(ParameterError):
    pass


class PacketInconsistency(RuntimeError):
    """An internal assertion failed; ``witness`` is an offending element."""

    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message} (witness {witness})")
        self.witness = witness


Chooser = Callable[[Sequence[int]], int]


def lowest_index(candidates: Sequence[int]) -> int:
    return min(candidates)


@dataclass(frozen=True)
class DualParameter:
    state: InvolutionState
    lam: RationalVector
    delta_phi: tuple[int, ...] = ()
    lattice: RationalLattice | None = None
    zeta: IntMatrix | None = None

    def __post_init__(self):
        d = self.state.datum
        delta = sorted({i if i < d.num_positive else d.negative(i) for i in self.delta_phi if 0 <= i < len(d.roots)})
        bad = [i for i in self.delta_phi if not 0 <= i < len(d.roots)]
        if bad:
            raise DatumClauseError(f"unknown root index {bad[0]}")
        object.__setattr__(self, "delta_phi", tuple(delta))
        n = d.rank
        if self.lattice is None:
            object.__setattr__(self, "lattice", RationalLattice.standard(n))
        if self.zeta is None:
            object.__setattr__(self, "zeta", identity(n))
        else:
            object.__setattr__(self, "zeta", as_matrix(self.zeta))

    @property
    def datum(self) -> BasedRootDatum:
        return self.state.datum

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def overlattice(self) -> RationalLattice:
        """``L`` transported to ``X`` coordinates by ``zeta^{-T}``."""
        return _lattice_to_x(self.lattice, self.zeta)

    def to_group(self, lam_x: RationalVector) -> RationalVector:
        """Group-side coordinates ``zeta^T lam`` of a vector in ``X`` coordinates."""
        return lam_x.transform(transpose(self.zeta))

    @property
    def is_tempered(self) -> bool:
        return self.lam.transform(transpose(self.state.theta)) == -self.lam


def _lattice_to_x(L: RationalLattice, zeta: IntMatrix) -> RationalLattice:
    n = L.rank
    if zeta == identity(n):
        return L
    m = transpose(unimodular_inverse(zeta))
    rows = [tuple(sum((Fraction(m[i][k]) * b[k] for k in range(n)), Fraction(0)) for i in range(n)) for b in L.basis]
    return RationalLattice.from_generators(rows, n)


def strongly_orthogonal(datum: BasedRootDatum, a: int, b: int) -> bool:
    ra, rb = datum.roots[a], datum.roots[b]
    if datum.pairing(a, b) or datum.pairing(b, a):
        return False
    return not (
        datum.is_root(tuple(x + y for x, y in zip(ra, rb))) or datum.is_root(tuple(x - y for x, y in zip(ra, rb)))
    )


def validate_parameter(p: DualParameter) -> DualParameter:
    """Check every parameter clause; each failure raises its own error type.

    >>> from realforms.root_datum import BasedRootDatum, InvolutionState
    >>> a1 = BasedRootDatum(1, ((2,),), ((1,),))
    >>> st = InvolutionState(a1, ((1,),), frozenset({0}))
    >>> validate_parameter(DualParameter(st, RationalVector((0,), 1), (0,))).delta_phi
    (0,)
    """
    d = p.datum
    n = d.rank
    if len(p.lam) != n:
        raise LambdaClauseError("infinitesimal character has the wrong length")
    theta = p.state.theta
    for a in p.delta_phi:
        if p.state.classify(a) != IMAGINARY:
            raise ImaginaryClauseError(f"root {a} is not imaginary")
        if a not in p.state.noncompact:
            raise NoncompactClauseError(f"root {a} is compact")
        if p.lam.pair(d.roots[a]) != 0:
            raise SingularityClauseError(f"root {a} is not singular for the infinitesimal character")
    for i, a in enumerate(p.delta_phi):
        for b in p.delta_phi[i + 1 :]:
            if not strongly_orthogonal(d, a, b):
                raise OrthogonalityClauseError(f"roots {a} and {b} are not strongly orthogonal")
    z = p.zeta
    if len(z) != n or any(len(r) != n for r in z) or abs(det(z)) != 1:
        raise ZetaClauseError("zeta must be a unimodular matrix of the datum's rank")
    coroots = set(d.coroots)
    if any(tuple(matvec(z, c)) not in coroots for c in d.coroots):
        raise ZetaClauseError("zeta does not carry the group-side roots to coroots")
    L = p.lattice
    if L.rank != n:
        raise OverlatticeClauseError("overlattice has the wrong rank")
    if not all(L.contains(e) for e in identity(n)):
        raise OverlatticeClauseError("overlattice does not contain the cocharacter lattice")
    Lx = p.overlattice
    if not Lx.is_stable(theta):
        raise OverlatticeClauseError("overlattice is not stable under the Galois action")
    for c in d.coroots:
        if any(sum((Fraction(x) * y for x, y in zip(c, b)), Fraction(0)).denominator != 1 for b in Lx.basis):
            raise OverlatticeClauseError("overlattice is not central: a root is not integral on it")
    return p


# ---------------------------------------------------------------------------
# Levi subsystem and Cayley chains


def build_dL(p: DualParameter) -> tuple[int, ...]:
    """Roots orthogonal to ``lam`` and to ``theta lam``."""
    d = p.datum
    lam = p.lam
    tlam = lam.transform(transpose(p.state.theta))
    return tuple(i for i, r in enumerate(d.roots) if lam.pair(r) == 0 and tlam.pair(r) == 0)


@dataclass(frozen=True)
class ChainRecord:
    start: InvolutionState
    steps: tuple[CayleyStep, ...]
    final: InvolutionState

    @property
    def roots(self) -> tuple[int, ...]:
        return tuple(s.root for s in self.steps)

    @property
    def points(self) -> tuple[RationalVector, ...]:
        return tuple(s.point.v for s in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class ShelstadResult:
    chain: ChainRecord
    m1_roots: tuple[int, ...]

    @property
    def state(self) -> InvolutionState:
        return self.chain.final


def shelstad_transform(p: DualParameter, order: Sequence[int] | None = None) -> ShelstadResult:
    """Cayley transforms through all roots of ``delta_phi`` (in ``order`` if given)."""
    roots = tuple(order) if order is not None else p.delta_phi
    if sorted(roots) != sorted(p.delta_phi):
        raise ParameterError("order must be a permutation of delta_phi")
    state = p.state
    steps = []
    for a in roots:
        state, step = cayley_imaginary(state, a)
        steps.append(step)
    chain = ChainRecord(p.state, tuple(steps), state)
    return ShelstadResult(chain, real_roots(p.datum, state.theta))


def maximally_split_chain(
    p: DualParameter, start: InvolutionState | None = None, choose: Chooser = lowest_index
) -> ChainRecord:
    """Greedy noncompact imaginary Cayley transforms inside ``dL`` until none remain."""
    origin = start if start is not None else shelstad_transform(p).state
    state = origin
    d = p.datum
    levi = [i for i in build_dL(p) if i < d.num_positive]
    steps = []
    limit = d.num_positive + 1
    while True:
        cands = [i for i in levi if i in state.noncompact and state.classify(i) == IMAGINARY]
        if not cands:
            break
        if len(steps) >= limit:
            raise PacketInconsistency("Cayley chain does not terminate", state.theta)
        before = len(state.real())
        beta = choose(cands)
        if beta not in cands:
            raise ParameterError(f"chooser returned {beta}, not a candidate")
        state, step = cayley_imaginary(state, beta)
        if len(state.real()) <= before:
            raise PacketInconsistency("Cayley step did not enlarge the real roots", beta)
        steps.append(step)
    return ChainRecord(origin, tuple(steps), state)


def transport_point(datum: BasedRootDatum, v: RationalVector, beta: int) -> RationalVector:
    """``v - (<beta, v> / 2) coroot``: the adjustment landing in ``ker beta``."""
    c = v.pair(datum.roots[beta]) / 2
    shift = RationalVector.from_fractions(c * x for x in datum.coroots[beta])
    return v - shift


def transport_through(datum: BasedRootDatum, v: RationalVector, roots: Sequence[int]) -> RationalVector:
    for b in roots:
        v = transport_point(datum, v, b)
    return v


# ---------------------------------------------------------------------------
# index sets


@dataclass(frozen=True)
class PacketIndexSet:
    side: str
    state: InvolutionState
    cover: CoverComponentGroup
    generators: tuple[int, ...]
    generator_classes: tuple[IntVector, ...]
    quotient: SubgroupQuotient
    admissible: tuple[IntVector, ...]

    @property
    def forms(self):
        return self.cover.forms

    @property
    def components(self):
        return self.cover.components

    def is_admissible(self, tau: Sequence[int]) -> bool:
        return self.forms.group.normalize(tau) in self.admissible


def _index_set(p: DualParameter, side: str, state: InvolutionState, gens: Sequence[int]) -> PacketIndexSet:
    d = p.datum
    T = TorusWithInvolution(state.theta)
    cover = cover_component_group(T, transpose(state.theta), p.overlattice)
    comps = cover.components
    gens = tuple(sorted(set(gens)))
    points = [RationalVector(d.coroots[a], 2) for a in gens]
    classes = tuple(comps.class_of_point(v) for v in points)
    quotient = quotient_by(comps.group, classes)
    admissible = []
    for f in cover.forms.group.elements():
        lam = cover.forms.representative(f)
        if all(cover.pair_point(v, lam) == 0 for v in points):
            admissible.append(tuple(f))
    if len(admissible) != quotient.quotient.order:
        raise PacketInconsistency("admissible characters do not match the quotient size", side)
    return PacketIndexSet(side, state, cover, gens, classes, quotient, tuple(admissible))


def group_two(p: DualParameter, shelstad: ShelstadResult | None = None) -> PacketIndexSet:
    """Index set over the Shelstad torus: generators from the transformed ``delta_phi``."""
    sh = shelstad if shelstad is not None else shelstad_transform(p)
    return _index_set(p, "KLS", sh.state, p.delta_phi)


def group_one(p: DualParameter, chain: ChainRecord | None = None) -> PacketIndexSet:
    """Index set over the maximally split torus: generators from the real roots of ``dL``."""
    ch = chain if chain is not None else maximally_split_chain(p)
    d = p.datum
    levi = set(build_dL(p))
    gens = [i for i in real_roots(d, ch.final.theta) if i in levi and i < d.num_positive]
    return _index_set(p, "ABV", ch.final, gens)


def step_monomorphism(p: DualParameter, state: InvolutionState, beta: int) -> GroupHom:
    """Component group at ``state`` into the post-Cayley one modulo ``coroot(-1)``."""
    if state.classify(beta) != IMAGINARY or beta not in state.noncompact:
        raise RootDatumError(f"root {beta} is not imaginary and noncompact")
    d = p.datum
    new, _ = cayley_imaginary(state, beta)
    src = _index_set(p, "source", state, ())
    tgt = _index_set(p, "target", new, (beta,))
    images = []
    for e in src.components.group.generators():
        v = transport_point(d, src.components.point_of(e), beta)
        images.append(tgt.quotient.project(tgt.components.class_of_point(v)))
    try:
        hom = GroupHom(src.components.group, tgt.quotient.quotient, tuple(images))
    except LatticeError as exc:
        raise PacketInconsistency(str(exc), beta) from None
    ker = hom.kernel()
    if len(ker) != 1:
        raise PacketInconsistency("step map is not injective", next(k for k in ker if any(k)))
    return hom


@dataclass(frozen=True)
class ChainIsomorphism:
    two: PacketIndexSet
    one: PacketIndexSet
    chain: ChainRecord
    lifted: GroupHom
    hom: GroupHom


def chain_isomorphism(
    p: DualParameter,
    shelstad: ShelstadResult | None = None,
    chain: ChainRecord | None = None,
) -> ChainIsomorphism:
    """The map from the Shelstad-side quotient to the maximally split one.

    Raises :class:`PacketInconsistency` with a witness unless it is a
    well-defined bijection.
    """
    sh = shelstad if shelstad is not None else shelstad_transform(p)
    ch = chain if chain is not None else maximally_split_chain(p, sh.state)
    two = group_two(p, sh)
    one = group_one(p, ch)
    d = p.datum
    comps1 = two.components
    images = []
    for e in comps1.group.generators():
        v = transport_through(d, comps1.point_of(e), ch.roots)
        images.append(one.quotient.project(one.components.class_of_point(v)))
    try:
        lifted = GroupHom(comps1.group, one.quotient.quotient, tuple(images))
    except LatticeError as exc:
        raise PacketInconsistency(str(exc)) from None
    for g in two.generator_classes:
        if any(lifted(g)):
            raise PacketInconsistency("a Shelstad generator survives in the target", g)
    q2 = two.quotient
    hom = GroupHom(q2.quotient, one.quotient.quotient, tuple(lifted(q2.lift(e)) for e in q2.quotient.generators()))
    if q2.quotient.order != one.quotient.quotient.order:
        raise PacketInconsistency(
            f"quotient sizes differ: {q2.quotient.order} != {one.quotient.quotient.order}"
        )
    ker = hom.kernel()
    if len(ker) != 1:
        raise PacketInconsistency("chain map is not injective", next(k for k in ker if any(k)))
    return ChainIsomorphism(two, one, ch, lifted, hom)


def transport_character(iso: ChainIsomorphism, tau1: Sequence[int]) -> IntVector:
    """The admissible character on the split side agreeing with ``tau1`` through the chain."""
    two, one = iso.two, iso.one
    tau1 = two.forms.group.normalize(tau1)
    if tau1 not in two.admissible:
        raise ParameterError(f"character {tau1} is not trivial on the Shelstad generators")
    d = two.state.datum
    lam1 = two.forms.representative(tau1)
    pts = []
    for e in two.components.group.generators():
        v = two.components.point_of(e)
        pts.append((two.cover.pair_point(v, lam1), transport_through(d, v, iso.chain.roots)))
    matches = []
    for f in one.admissible:
        lam = one.forms.representative(f)
        if all(one.cover.pair_point(w, lam) == val for val, w in pts):
            matches.append(f)
    if len(matches) != 1:
        raise PacketInconsistency(f"{len(matches)} characters match under transport", tau1)
    return matches[0]


@dataclass(frozen=True)
class StrongFormAssignment:
    tau: IntVector
    lam1: RationalVector
    group_lam1: RationalVector
    orthogonal: bool
    reflection_fixed: bool

    def describe(self) -> str:
        if self.lam1.is_integral() and not any(self.lam1.numerators):
            return "delta_q"
        return f"exp(pi i {self.group_lam1}) delta_q"


def _orthogonal_representative(index: PacketIndexSet, tau: IntVector, roots: Sequence[int]) -> RationalVector:
    forms = index.forms
    lam0 = forms.representative(tau)
    if not roots:
        return lam0
    d = index.state.datum
    n = d.rank
    one_minus = sub(identity(n), index.state.theta)
    a = [tuple(matvec(transpose(one_minus), d.coroots[b])) for b in roots]
    rhs = []
    for b in roots:
        val = -lam0.pair(d.coroots[b])
        if val.denominator != 1:
            raise PacketInconsistency("overlattice is not integral on a chain coroot", b)
        rhs.append(int(val))
    x = solve_integer(a, rhs)
    if x is None:
        return lam0
    return lam0 + RationalVector(tuple(matvec(one_minus, x)), 1)


def strong_form_of_character(
    p: DualParameter, index: PacketIndexSet, tau: Sequence[int], chain_roots: Sequence[int] = ()
) -> StrongFormAssignment:
    """A representative ``lam1`` of ``tau`` chosen orthogonal to the chain coroots."""
    tau = index.forms.group.normalize(tau)
    if tau not in index.admissible:
        raise ParameterError(f"character {tau} is not admissible")
    d = p.datum
    lam1 = _orthogonal_representative(index, tau, chain_roots)
    orth = all(lam1.pair(d.coroots[b]) == 0 for b in chain_roots)
    fixed = all(lam1.transform(weyl_reflection(d, b)) == lam1 for b in chain_roots)
    return StrongFormAssignment(tau, lam1, p.to_group(lam1), orth, fixed)


# ---------------------------------------------------------------------------
# comparison


def common_representative(
    two: PacketIndexSet, tau1: IntVector, one: PacketIndexSet, tau_d: IntVector, roots: Sequence[int]
) -> RationalVector | None:
    """A single vector representing ``tau1`` on the Shelstad side and ``tau_d`` on the split side.

    Solves for integers x, y with lam = a + (1-s_d)x = k + (1-s_1)y and
    <coroot b, lam> = 0 for every chain root b. Returns None when no such vector exists.
    """
    d = two.state.datum
    n = d.rank
    k = two.forms.representative(tau1)
    a = one.forms.representative(tau_d)
    m1 = sub(identity(n), one.state.theta)
    m2 = sub(identity(n), two.state.theta)
    diff = k - a
    if not diff.is_integral():
        return None
    rows: list[tuple[int, ...]] = []
    rhs: list[int] = []
    for i in range(n):
        rows.append(tuple(m1[i]) + tuple(-x for x in m2[i]))
        rhs.append(int(diff.entries[i]))
    for b in roots:
        val = -a.pair(d.coroots[b])
        if val.denominator != 1:
            return None
        rows.append(tuple(matvec(transpose(m1), d.coroots[b])) + (0,) * n)
        rhs.append(int(val))
    sol = solve_integer(rows, rhs)
    if sol is None:
        return None
    return a + RationalVector(tuple(matvec(m1, sol[:n])), 1)


@dataclass(frozen=True)
class ComparisonRow:
    index: int
    tau_kls: IntVector
    tau_abv: IntVector
    lam1: RationalVector | None
    lam_kls: RationalVector
    lam_abv: RationalVector
    orthogonal: bool
    reflection_fixed: bool

    @property
    def same_class(self) -> bool:
        return self.lam1 is not None

    @property
    def passed(self) -> bool:
        return self.same_class and self.orthogonal and self.reflection_fixed


@dataclass(frozen=True)
class ComparisonReport:
    parameter: DualParameter
    chain: tuple[CayleyStep, ...]
    shelstad_steps: tuple[CayleyStep, ...]
    two: PacketIndexSet | None
    one: PacketIndexSet | None
    rows: tuple[ComparisonRow, ...]
    isomorphism_ok: bool
    messages: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.isomorphism_ok and all(r.passed for r in self.rows)


def compare_packets(p: DualParameter, choose: Chooser = lowest_index) -> ComparisonReport:
    """Match every admissible Shelstad-side character with its split-side strong form."""
    validate_parameter(p)
    sh = shelstad_transform(p)
    chain = maximally_split_chain(p, sh.state, choose)
    try:
        iso = chain_isomorphism(p, sh, chain)
    except PacketInconsistency as exc:
        two = group_two(p, sh)
        one = group_one(p, chain)
        return ComparisonReport(p, chain.steps, sh.chain.steps, two, one, (), False, (str(exc),))
    roots = chain.roots
    rows = []
    msgs = []
    for k, tau1 in enumerate(iso.two.admissible):
        try:
            tau_d = transport_character(iso, tau1)
        except PacketInconsistency as exc:
            msgs.append(str(exc))
            return ComparisonReport(p, chain.steps, sh.chain.steps, iso.two, iso.one, tuple(rows), False, tuple(msgs))
        kls = strong_form_of_character(p, iso.two, tau1, roots)
        abv = strong_form_of_character(p, iso.one, tau_d, roots)
        lam = common_representative(iso.two, tau1, iso.one, tau_d, roots)
        d = p.datum
        orth = lam is not None and all(lam.pair(d.coroots[b]) == 0 for b in roots)
        fixed = lam is not None and all(lam.transform(weyl_reflection(d, b)) == lam for b in roots)
        rows.append(ComparisonRow(k, tau1, tau_d, lam, kls.lam1, abv.lam1, orth, fixed))
    return ComparisonReport(p, chain.steps, sh.chain.steps, iso.two, iso.one, tuple(rows), True, tuple(msgs))
