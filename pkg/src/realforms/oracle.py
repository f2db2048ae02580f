"""Brute-force referees for the lattice computations.

Everything here works with explicit finite sets of torsion points
``exp(2 pi i v)``, ``v`` a rational vector with bounded denominator.  No Smith
normal form is used: quotients are found by coset enumeration, identity
components as images of ``t -> t * theta(t)``, and groups are identified by
peeling off elements of maximal order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .exact_lattice import FinAbGroup, RationalLattice, RationalVector, transpose
from .packet_param import DualParameter, PacketInconsistency, chain_isomorphism, maximally_split_chain, shelstad_transform
from .root_datum import IMAGINARY, InvolutionState, weyl_reflection
from .torus_forms import TorusWithInvolution

Point = tuple[Fraction, ...]


class OracleError(ValueError):
    pass


class PointSpace:
    """Points ``v`` of a torus with cocharacter lattice ``Y = Z^n``, or of a cover.

    For a cover the points are taken modulo the dual of ``lattice`` (a
    sublattice of ``Y``), found by testing integer vectors mod the exponent.
    """

    def __init__(self, rank: int, lattice: RationalLattice | None = None):
        self.rank = rank
        if lattice is None:
            self.exponent = 1
            self.shifts: tuple[tuple[int, ...], ...] = (tuple([0] * rank),)
        else:
            rows = lattice.basis
            e = lcm(1, *(x.denominator for r in rows for x in r))
            shifts = []
            for y in itertools.product(range(e), repeat=rank):
                if all(sum((a * b for a, b in zip(y, r)), Fraction(0)).denominator == 1 for r in rows):
                    shifts.append(y)
            self.exponent = e
            self.shifts = tuple(shifts)

    @property
    def kernel_order(self) -> int:
        return self.exponent**self.rank // len(self.shifts)

    def canon(self, v: Iterable) -> Point:
        e = self.exponent
        v = [Fraction(x) for x in v]
        return min(tuple((x + s) % e for x, s in zip(v, d)) for d in self.shifts)

    def points(self, N: int) -> list[Point]:
        """All classes with ``N v`` integral, one per class."""
        e = self.exponent
        seen = set()
        for k in itertools.product(range(e * N), repeat=self.rank):
            seen.add(self.canon(Fraction(x, N) for x in k))
        return sorted(seen)

    def add(self, a: Point, b: Point) -> Point:
        return self.canon(x + y for x, y in zip(a, b))

    def neg(self, a: Point) -> Point:
        return self.canon(-x for x in a)


def _apply(m, v) -> Point:
    return tuple(sum((m[i][j] * v[j] for j in range(len(v))), Fraction(0)) for i in range(len(m)))


def _pair(a: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, v)), Fraction(0))


def _level(v: Point) -> int:
    return lcm(1, *(x.denominator for x in v))


@dataclass(frozen=True)
class EnumeratedGroup:
    space: PointSpace = field(compare=False, repr=False)
    bound: int
    elements: tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, v) -> bool:
        return self.space.canon(v) in set(self.elements)

    def add(self, a: Point, b: Point) -> Point:
        return self.space.add(a, b)


def enumerate_points(T: TorusWithInvolution | int, N: int, lattice: RationalLattice | None = None) -> EnumeratedGroup:
    """All points of order dividing ``N`` (``N^rank`` of them for the torus itself).

    >>> [str(x) for (x,) in enumerate_points(1, 4).elements]
    ['0', '1/4', '1/2', '3/4']
    """
    if N < 1:
        raise OracleError("denominator bound must be positive")
    n = T if isinstance(T, int) else T.rank
    space = PointSpace(n, lattice)
    return EnumeratedGroup(space, N, tuple(space.points(N)))


def _span(space: PointSpace, gens: Iterable[Point]) -> set[Point]:
    zero = space.canon([0] * space.rank)
    H = {zero}
    frontier = [zero]
    gens = [space.canon(g) for g in gens]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                s = space.add(h, g)
                if s not in H:
                    H.add(s)
                    nxt.append(s)
        frontier = nxt
    return H


def _cosets(space: PointSpace, elements: Iterable[Point], H: set[Point]) -> dict[Point, Point]:
    """Map each element to the least element of its coset."""
    rep: dict[Point, Point] = {}
    for g in sorted(elements):
        if g in rep:
            continue
        for h in H:
            rep.setdefault(space.add(g, h), g)
    return rep


def _invariants(space: PointSpace, elements: Sequence[Point], H: set[Point]) -> FinAbGroup:
    """Peel off cyclic summands of maximal order from ``elements / H``."""
    H = set(H)
    elems = list(elements)
    factors = []
    while True:
        rep = _cosets(space, elems, H)
        classes = sorted(set(rep[g] for g in elems))
        if len(classes) == 1:
            break
        best, best_order = None, 1
        for c in classes:
            k, x = 1, c
            while x not in H:
                x = space.add(x, c)
                k += 1
            if k > best_order:
                best, best_order = c, k
        factors.append(best_order)
        H = _closure(space, H, best)
    return FinAbGroup(tuple(reversed(factors)))


def _closure(space: PointSpace, H: set[Point], g: Point) -> set[Point]:
    out = set(H)
    x = g
    while x not in H:
        out |= {space.add(x, h) for h in H}
        x = space.add(x, g)
    return out


def brute_quotient(G: EnumeratedGroup, relations: Iterable[Sequence] = ()) -> FinAbGroup:
    """``G / <relations>`` by coset enumeration.

    >>> str(brute_quotient(enumerate_points(1, 4), [[Fraction(1, 2)]]))
    'Z/2'
    """
    space = G.space
    H = _span(space, relations)
    return _invariants(space, G.elements, H)


# ---------------------------------------------------------------------------
# fixed points and identity components


class _FixedData:
    """Fixed points of ``theta_y`` on a torus or cover, with its identity component."""

    def __init__(self, theta_y, lattice: RationalLattice | None = None):
        self.theta = theta_y
        self.rank = len(theta_y)
        self.space = PointSpace(self.rank, lattice)
        self._identity: dict[int, frozenset[Point]] = {}

    def is_fixed(self, v: Sequence) -> bool:
        tv = _apply(self.theta, v)
        return all((a - b).denominator == 1 for a, b in zip(tv, v))

    def fixed_points(self, N: int) -> list[Point]:
        return [v for v in self.space.points(N) if self.is_fixed(v)]

    def identity_component(self, N: int) -> frozenset[Point]:
        """Points of order dividing ``N`` in the image of ``u -> u + theta u``."""
        if N not in self._identity:
            out = set()
            for u in self.space.points(2 * N):
                w = self.space.canon(a + b for a, b in zip(u, _apply(self.theta, u)))
                if N % _level(w) == 0:
                    out.add(w)
            self._identity[N] = frozenset(out)
        return self._identity[N]

    def in_identity_component(self, v: Sequence) -> bool:
        w = self.space.canon(v)
        return w in self.identity_component(_level(w))


@dataclass(frozen=True)
class Certificate:
    name: str
    bound: int
    checks: tuple[tuple[str, bool, int], ...]
    witness: object = None

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def summary(self) -> str:
        parts = [f"{label}:{'ok' if ok else 'FAIL'}({count})" for label, ok, count in self.checks]
        status = "pass" if self.passed else f"FAIL witness={self.witness}"
        return f"{self.name} N={self.bound} " + " ".join(parts) + f" -> {status}"


def _fmt(v: Sequence) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def verify_lemma_toralquo(
    state: InvolutionState, beta: int, N: int, lattice: RationalLattice | None = None
) -> Certificate:
    """Check the Cayley-transform clauses for the dual torus at ``beta``, elementwise.

    The torus has cocharacters ``Y``; ``theta`` acts there by its transpose.
    With ``lattice`` the checks run on the cover whose cocharacter lattice is
    the dual of ``lattice``, adding the decomposition clause.
    """
    d = state.datum
    if state.classify(beta) != IMAGINARY:
        raise OracleError(f"root {beta} is not imaginary")
    if beta not in state.noncompact:
        raise OracleError(f"root {beta} is compact")
    if N % 4:
        raise OracleError("denominator bound must be a multiple of 4")
    b = d.roots[beta]
    cb = d.coroots[beta]
    half = tuple(Fraction(x, 2) for x in cb)
    old = _FixedData(transpose(state.theta), lattice)
    new_theta = transpose(_matmul(weyl_reflection(d, beta), state.theta))
    new = _FixedData(new_theta, lattice)
    sp = old.space
    witness = None

    fixed_N = old.fixed_points(N)
    ker_fixed = [v for v in fixed_N if _pair(b, v).denominator == 1]
    ker_id = {v for v in old.identity_component(N) if _pair(b, v).denominator == 1}
    new_id_half = {sp.add(w, e) for w in new.identity_component(N) for e in (tuple([Fraction(0)] * sp.rank), half)}
    new_id_half = {v for v in new_id_half if N % _level(v) == 0}

    # ker beta on the fixed points stays fixed after the transform
    a_bad = [v for v in ker_fixed if not new.is_fixed(v)]
    witness = witness or (a_bad and ("a", _fmt(a_bad[0])))
    # identity components: ker beta on the old one is the new one times coroot(-1)
    diff = sorted(ker_id ^ new_id_half)
    witness = witness or (diff and ("b", _fmt(diff[0])))
    # the induced map of component groups is injective
    c_bad = [v for v in ker_fixed if (v in new_id_half) != (v in ker_id)]
    witness = witness or (c_bad and ("c", _fmt(c_bad[0])))

    # v -> v - (<beta, v>/2) coroot induces an isomorphism of component groups
    def move(v: Point) -> Point:
        c = _pair(b, v) / 2
        return sp.canon(x - c * y for x, y in zip(v, cb))

    d_bad = []
    moved = {v: move(v) for v in fixed_N}
    for v, w in moved.items():
        if _pair(b, w).denominator != 1 or not old.is_fixed(w):
            d_bad.append(v)
        elif old.in_identity_component(v) != old.in_identity_component(w):
            d_bad.append(v)
    comp_old = _component_count(sp, fixed_N, old.identity_component(N))
    N2 = 2 * N
    ker_fixed2 = [v for v in old.fixed_points(N2) if _pair(b, v).denominator == 1]
    ker_id2 = {v for v in old.identity_component(N2) if _pair(b, v).denominator == 1}
    comp_ker = _component_count(sp, ker_fixed2, ker_id2)
    d_ok = not d_bad and comp_old == comp_ker
    witness = witness or (not d_ok and ("d", _fmt(d_bad[0]) if d_bad else f"{comp_old} != {comp_ker}"))

    if lattice is None:
        name = "cayley-quotient"
        checks = [
            ("a", not a_bad, len(ker_fixed)),
            ("b", not diff, len(ker_id)),
            ("c", not c_bad, len(ker_fixed)),
            ("d", d_ok, len(fixed_N)),
        ]
    else:
        # each fixed point of the cover lies in ker beta times the image of the coroot
        e_bad = [v for v, w in moved.items() if not (_pair(b, w).denominator == 1 and new.is_fixed(w))]
        witness = witness or (e_bad and ("b", _fmt(e_bad[0])))
        name = "cayley-quotient-cover"
        checks = [
            ("a", not a_bad, len(ker_fixed)),
            ("b", not e_bad, len(fixed_N)),
            ("c", not diff, len(ker_id)),
            ("d", not c_bad, len(ker_fixed)),
            ("e", d_ok, len(fixed_N)),
        ]
    return Certificate(name, N, tuple(checks), witness or None)


def _matmul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))) for i in range(len(a)))


def _component_count(space: PointSpace, fixed: Sequence[Point], ident: Iterable[Point]) -> int:
    return len(set(_cosets(space, fixed, set(ident)).values()))


def default_bound(p: DualParameter) -> int:
    j = PointSpace(p.rank, p.overlattice).kernel_order
    return 2 * lcm(4, j)


def verify_diagram(p: DualParameter, N: int | None = None) -> Certificate:
    """Chase every fixed point of the Shelstad-side cover around the square.

    One way: move through the chain with ``v -> v - (<beta, v>/2) coroot``
    and take the class modulo the identity component and the real-root
    points.  Other way: the package's quotient class followed by its chain
    isomorphism, lifted back to a point.  Both columns are also checked
    against brute-force membership.
    """
    N = N if N is not None else default_bound(p)
    d = p.datum
    sh = shelstad_transform(p)
    chain = maximally_split_chain(p, sh.state)
    try:
        iso = chain_isomorphism(p, sh, chain)
    except PacketInconsistency as exc:
        return Certificate("diagram", N, (("isomorphism", False, 0),), str(exc))
    L = p.overlattice if p.overlattice != RationalLattice.standard(p.rank) else None
    top = _FixedData(transpose(iso.two.state.theta), L)
    bottom = _FixedData(transpose(iso.one.state.theta), L)
    sp = top.space
    halves_two = [tuple(Fraction(x, 2) for x in d.coroots[a]) for a in iso.two.generators]
    halves_one = [tuple(Fraction(x, 2) for x in d.coroots[a]) for a in iso.one.generators]
    H_two = _span(sp, halves_two)
    H_one = _span(sp, halves_one)

    def in_sub(data: _FixedData, H: set[Point], v: Sequence) -> bool:
        return any(data.in_identity_component(sp.add(sp.canon(v), sp.neg(h))) for h in H)

    points = top.fixed_points(N)
    bad_left = bad_right = bad_square = None
    for v in points:
        # left column: brute membership versus the package's quotient class
        e2 = iso.two.quotient.project(iso.two.components.class_of_point(RationalVector.from_fractions(v)))
        if in_sub(top, H_two, v) != (not any(e2)):
            bad_left = bad_left or _fmt(v)
        w = v
        for beta in chain.roots:
            c = _pair(d.roots[beta], w) / 2
            w = tuple(x - c * y for x, y in zip(w, d.coroots[beta]))
        if not bottom.is_fixed(w):
            bad_square = bad_square or _fmt(v)
            continue
        e1 = iso.one.quotient.project(iso.one.components.class_of_point(RationalVector.from_fractions(w)))
        if in_sub(bottom, H_one, w) != (not any(e1)):
            bad_right = bad_right or _fmt(w)
        image = iso.hom(e2)
        u = iso.one.components.point_of(iso.one.quotient.lift(image))
        delta = tuple(a - b for a, b in zip(u.entries, w))
        if not in_sub(bottom, H_one, delta):
            bad_square = bad_square or _fmt(v)
    two_order = _component_count(sp, points, _closure_set(sp, top.identity_component(N), H_two))
    one_points = bottom.fixed_points(N)
    one_order = _component_count(sp, one_points, _closure_set(sp, bottom.identity_component(N), H_one))
    sizes_ok = two_order == one_order == iso.two.quotient.quotient.order == iso.one.quotient.quotient.order
    checks = (
        ("left", bad_left is None, len(points)),
        ("right", bad_right is None, len(points)),
        ("square", bad_square is None, len(points)),
        ("sizes", sizes_ok, two_order),
    )
    witness = bad_left or bad_right or bad_square or (None if sizes_ok else f"{two_order} vs {one_order}")
    return Certificate("diagram", N, checks, witness)


def _closure_set(space: PointSpace, A: Iterable[Point], H: set[Point]) -> set[Point]:
    return {space.add(a, h) for a in A for h in H}


def verify_fixture_lemmas(p: DualParameter, N: int) -> list[Certificate]:
    """All lemma certificates for the imaginary noncompact positive roots of ``p``.

    Covers the starting state and every state along the Shelstad and
    maximally split chains, on the torus and, when ``p`` has a nontrivial
    overlattice, on the cover.
    """
    sh = shelstad_transform(p)
    chain = maximally_split_chain(p, sh.state)
    states = [p.state] + [s for s in (sh.state, chain.final)]
    L = p.overlattice if p.overlattice != RationalLattice.standard(p.rank) else None
    out = []
    seen = set()
    for st in states:
        key = (st.theta, st.noncompact)
        if key in seen:
            continue
        seen.add(key)
        for beta in st.imaginary():
            if beta >= p.datum.num_positive or beta not in st.noncompact:
                continue
            out.append(verify_lemma_toralquo(st, beta, N))
            if L is not None:
                out.append(verify_lemma_toralquo(st, beta, N, L))
    return out


def brute_component_group(theta_y, N: int = 4, lattice: RationalLattice | None = None) -> FinAbGroup:
    """Fixed points of ``theta_y`` modulo the identity component, by enumeration.

    ``theta_y`` acts on the cocharacters; with ``lattice`` the count is for
    the cover with cocharacter lattice dual to ``lattice``.  Every component
    has a representative ``-m/2`` with ``m`` integral, so ``N = 4`` suffices
    for the torus and ``N = 2 * exponent`` for a cover.
    """
    data = _FixedData(theta_y, lattice)
    fixed = data.fixed_points(N)
    return _invariants(data.space, fixed, set(data.identity_component(N)))
