"""Real forms of algebraic tori with a Galois involution.

A torus is its cocharacter lattice ``X = Z^n`` with an involution ``sigma``.
A finite central subgroup ``J`` is modelled by a sigma-stable overlattice
``X <= L <= X (x) Q`` so that ``J = L / X`` under ``v -> exp(2 pi i v)``.
Strong real forms of type ``J`` are classes of ``lambda_1 in L^{-sigma}``
modulo ``(1 - sigma) X``; pure forms are the case ``L = X``.

On the dual side, ``theta`` acts on ``Y = Z^n`` (the character lattice of
the group-side torus).  The component group of the theta-fixed points of the
dual torus, or of its cover with cocharacter lattice ``L^dual``, is
``Y^{-theta} / (1 - theta) L^dual`` via ``exp(2 pi i v) -> (theta - 1) v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .exact_lattice import (
    FinAbGroup,
    IntMatrix,
    LatticeError,
    LatticeQuotient,
    RationalLattice,
    RationalVector,
    as_matrix,
    eigenlattice,
    finite_quotient,
    identity,
    is_involution,
    matvec,
    rational_eigenlattice,
    rational_inverse,
    sub,
    transpose,
)


class TorusError(ValueError):
    """Invalid torus data."""


@dataclass(frozen=True)
class TorusWithInvolution:
    sigma: IntMatrix

    def __post_init__(self):
        s = as_matrix(self.sigma)
        if any(len(r) != len(s) for r in s):
            raise TorusError("involution must be square")
        if not is_involution(s):
            raise TorusError("matrix is not an involution")
        object.__setattr__(self, "sigma", s)

    @property
    def rank(self) -> int:
        return len(self.sigma)

    def dual(self) -> "TorusWithInvolution":
        return TorusWithInvolution(transpose(self.sigma))


@dataclass(frozen=True)
class TorusPoint:
    """The finite-order point ``exp(2 pi i v)``; ``v`` is kept reduced mod 1."""

    v: RationalVector

    def __post_init__(self):
        object.__setattr__(self, "v", self.v.mod_one())

    @classmethod
    def of(cls, xs: Iterable) -> "TorusPoint":
        return cls(RationalVector.from_fractions(xs))

    @property
    def order(self) -> int:
        return self.v.denominator

    def is_identity(self) -> bool:
        return self.v.denominator == 1

    def __str__(self) -> str:
        return f"exp(2 pi i {self.v})"


def overlattice(T: TorusWithInvolution, rows: Iterable[Sequence]) -> RationalLattice:
    """Validated sigma-stable overlattice of ``Z^n`` from rational generators."""
    n = T.rank
    gens = [tuple(Fraction(x) for x in r) for r in rows]
    gens += [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    L = RationalLattice.from_generators(gens, n) if n else RationalLattice((), 1)
    if not L.is_stable(T.sigma):
        raise TorusError("overlattice is not stable under the involution")
    return L


def _check_overlattice(T: TorusWithInvolution, L: RationalLattice | None) -> RationalLattice:
    if L is None:
        return RationalLattice.standard(T.rank)
    if L.rank != T.rank:
        raise TorusError("overlattice rank mismatch")
    if not all(L.contains(e) for e in identity(T.rank)):
        raise TorusError("lattice does not contain the cocharacter lattice")
    if not L.is_stable(T.sigma):
        raise TorusError("overlattice is not stable under the involution")
    return L


@dataclass(frozen=True)
class AntiFixedQuotient:
    """``L^{-sigma} / (1 - sigma) X`` with its basis and Smith presentation."""

    torus: TorusWithInvolution
    lattice: RationalLattice
    basis: tuple[tuple[Fraction, ...], ...]
    quotient: LatticeQuotient

    @property
    def group(self) -> FinAbGroup:
        return self.quotient.group

    def coordinates(self, lam: Sequence) -> tuple[int, ...]:
        lam = tuple(Fraction(x) for x in lam)
        n = self.torus.rank
        if matvec(self.torus.sigma, lam) != tuple(-x for x in lam):
            raise TorusError("vector is not in the (-1)-eigenspace of the involution")
        if not self.basis:
            if any(lam):
                raise TorusError("vector is not in the lattice")
            return ()
        # solve lam = sum c_i basis_i using a full-rank minor
        k = len(self.basis)
        cols = _pivot_columns(self.basis, n)
        m = tuple(tuple(self.basis[i][c] for i in range(k)) for c in cols)
        inv = rational_inverse(m)
        coeffs = tuple(sum((inv[i][j] * lam[cols[j]] for j in range(k)), Fraction(0)) for i in range(k))
        if any(c.denominator != 1 for c in coeffs):
            raise TorusError("vector is not in the overlattice")
        back = tuple(sum((coeffs[i] * self.basis[i][j] for i in range(k)), Fraction(0)) for j in range(n))
        if back != lam:
            raise TorusError("vector is not in the overlattice")
        return tuple(int(c) for c in coeffs)

    def element(self, lam: Sequence) -> tuple[int, ...]:
        return self.quotient.project(self.coordinates(lam))

    def representative(self, element: Sequence[int]) -> RationalVector:
        c = self.quotient.lift(element)
        n = self.torus.rank
        vec = tuple(sum((ci * self.basis[i][j] for i, ci in enumerate(c)), Fraction(0)) for j in range(n))
        return RationalVector.from_fractions(vec)

    def same_class(self, a: Sequence, b: Sequence) -> bool:
        return self.element(a) == self.element(b)


def _pivot_columns(rows: Sequence[Sequence[Fraction]], n: int) -> tuple[int, ...]:
    """Columns giving an invertible minor of a full-row-rank rational matrix."""
    m = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(piv)


def antifixed_quotient(T: TorusWithInvolution, L: RationalLattice | None = None) -> AntiFixedQuotient:
    L = _check_overlattice(T, L)
    n = T.rank
    basis = rational_eigenlattice(L, T.sigma, -1) if n else ()
    one_minus = sub(identity(n), T.sigma)
    rel_vectors = [tuple(Fraction(x) for x in col) for col in transpose(one_minus)] if n else []
    tmp = AntiFixedQuotient(T, L, basis, finite_quotient(len(basis), []))
    relations = [tmp.coordinates(v) for v in rel_vectors]
    q = finite_quotient(len(basis), relations)
    if q.free_rank:
        raise LatticeError("anti-fixed quotient is unexpectedly infinite")
    return AntiFixedQuotient(T, L, basis, q)


def pure_real_forms(T: TorusWithInvolution) -> FinAbGroup:
    """Classes of pure real forms, ``X^{-sigma} / (1 - sigma) X``.

    >>> str(pure_real_forms(TorusWithInvolution(((-1,),))))
    'Z/2'
    """
    return antifixed_quotient(T).group


def type_J_forms(T: TorusWithInvolution, L: RationalLattice) -> FinAbGroup:
    """Classes of strong real forms of type ``J = L / X``."""
    return antifixed_quotient(T, L).group


@dataclass(frozen=True)
class StrongFormClass:
    """A strong real form ``exp(pi i lambda_1) delta_q`` up to equivalence.

    ``representative`` is the canonical lift of ``element``; two classes are
    equal exactly when their elements agree in the same group.
    """

    kind: str
    sigma: IntMatrix
    lattice: RationalLattice
    group: FinAbGroup
    element: tuple[int, ...]
    representative: RationalVector

    @property
    def order(self) -> int:
        return self.group.element_order(self.element)

    def is_identity(self) -> bool:
        return not any(self.element)

    def describe(self) -> str:
        if self.is_identity():
            return "delta_q"
        return f"exp(pi i {self.representative}) delta_q"


def strong_form_class(
    T: TorusWithInvolution, lam1: RationalVector | Sequence, L: RationalLattice | None = None
) -> StrongFormClass:
    """Normalised class of ``lambda_1`` modulo ``(1 - sigma) X``.

    Without ``L`` the class lives in the pure group when ``lambda_1`` is
    integral and otherwise in the smallest sigma-stable overlattice containing
    ``lambda_1``.
    """
    lam = lam1 if isinstance(lam1, RationalVector) else RationalVector.from_fractions(lam1)
    if len(lam) != T.rank:
        raise TorusError("vector length does not match the torus rank")
    entries = lam.entries
    if matvec(T.sigma, entries) != tuple(-x for x in entries):
        raise TorusError("lambda_1 is not negated by the involution")
    if L is not None:
        kind = "type-J"
    elif lam.is_integral():
        kind = "pure"
    else:
        kind = "general"
        L = overlattice(T, [entries])
    data = antifixed_quotient(T, L)
    el = data.element(entries)
    return StrongFormClass(kind, T.sigma, data.lattice, data.group, el, data.representative(el))


# ---------------------------------------------------------------------------
# dual side


def dual_lattice(L: RationalLattice) -> IntMatrix:
    """Basis rows of ``{y : <y, l> in Z for all l in L}`` (integral when L >= Z^n)."""
    n = L.rank
    if n == 0:
        return ()
    inv = rational_inverse(L.basis)  # columns give the dual basis
    rows = transpose(inv)
    if any(x.denominator != 1 for r in rows for x in r):
        raise TorusError("lattice does not contain the cocharacter lattice")
    return tuple(tuple(int(x) for x in r) for r in rows)


@dataclass(frozen=True)
class FixedComponentGroup:
    """Component group of the theta-fixed points of a torus or of its cover.

    The torus has cocharacter lattice ``Y = Z^n``; the cover has the sublattice
    ``cover`` (rows).  The group is ``Y^{-theta} / (1 - theta) cover``.
    """

    theta: IntMatrix
    cover: IntMatrix
    basis: IntMatrix
    quotient: LatticeQuotient

    @property
    def group(self) -> FinAbGroup:
        return self.quotient.group

    def _coords(self, m: Sequence[int]) -> tuple[int, ...]:
        n = len(self.theta)
        k = len(self.basis)
        if not k:
            if any(m):
                raise TorusError("vector is not anti-fixed")
            return ()
        fr = [tuple(Fraction(x) for x in r) for r in self.basis]
        cols = _pivot_columns(fr, n)
        minor = tuple(tuple(fr[i][c] for i in range(k)) for c in cols)
        inv = rational_inverse(minor)
        coeffs = tuple(sum((inv[i][j] * m[cols[j]] for j in range(k)), Fraction(0)) for i in range(k))
        back = tuple(sum((coeffs[i] * fr[i][j] for i in range(k)), Fraction(0)) for j in range(n))
        if back != tuple(Fraction(x) for x in m) or any(c.denominator != 1 for c in coeffs):
            raise TorusError("vector is not in the anti-fixed lattice")
        return tuple(int(c) for c in coeffs)

    def is_fixed_point(self, v: RationalVector | Sequence) -> bool:
        ent = v.entries if isinstance(v, RationalVector) else tuple(Fraction(x) for x in v)
        m = tuple(a - b for a, b in zip(matvec(self.theta, ent), ent))
        return all(x.denominator == 1 for x in m)

    def class_of_point(self, v: RationalVector | Sequence) -> tuple[int, ...]:
        """Component of ``exp(2 pi i v)``; ``v`` must be fixed in the base torus."""
        ent = v.entries if isinstance(v, RationalVector) else tuple(Fraction(x) for x in v)
        m = tuple(a - b for a, b in zip(matvec(self.theta, ent), ent))
        if any(x.denominator != 1 for x in m):
            raise TorusError("point is not fixed by the involution")
        return self.quotient.project(self._coords(tuple(int(x) for x in m)))

    def anti_fixed_vector(self, element: Sequence[int]) -> tuple[int, ...]:
        c = self.quotient.lift(element)
        n = len(self.theta)
        return tuple(sum(ci * self.basis[i][j] for i, ci in enumerate(c)) for j in range(n))

    def point_of(self, element: Sequence[int]) -> RationalVector:
        """A fixed point ``v`` in the given component (``v = -m / 2``)."""
        m = self.anti_fixed_vector(element)
        return RationalVector(tuple(-x for x in m), 2)


def fixed_component_group(theta: Sequence[Sequence[int]], cover: Sequence[Sequence[int]] | None = None) -> FixedComponentGroup:
    th = as_matrix(theta)
    n = len(th)
    if not is_involution(th):
        raise TorusError("matrix is not an involution")
    cov = as_matrix(cover) if cover is not None else identity(n)
    basis = eigenlattice(th, -1) if n else ()
    tmp = FixedComponentGroup(th, cov, basis, finite_quotient(len(basis), []))
    one_minus = sub(identity(n), th)
    relations = [tmp._coords(matvec(one_minus, y)) for y in cov]
    q = finite_quotient(len(basis), relations)
    if q.free_rank:
        raise LatticeError("component group is unexpectedly infinite")
    return FixedComponentGroup(th, cov, basis, q)


def pi0_fixed(S: TorusWithInvolution) -> FixedComponentGroup:
    """``pi_0`` of the fixed points of ``S`` under its involution.

    >>> str(pi0_fixed(TorusWithInvolution(((-1,),))).group)
    'Z/2'
    """
    return fixed_component_group(S.sigma)


@dataclass(frozen=True)
class CoverComponentGroup:
    """``Q_J = L^{-sigma} / (1 - sigma) X`` paired with the dual cover's component group."""

    forms: AntiFixedQuotient
    components: FixedComponentGroup

    @property
    def group(self) -> FinAbGroup:
        return self.forms.group

    def pair_point(self, v: RationalVector | Sequence, lam1: Sequence) -> Fraction:
        """Value in ``Q/Z`` of the character ``lambda_1`` on the component of ``v``."""
        ent = v.entries if isinstance(v, RationalVector) else tuple(Fraction(x) for x in v)
        lam = lam1.entries if isinstance(lam1, RationalVector) else tuple(Fraction(x) for x in lam1)
        return sum((a * b for a, b in zip(ent, lam)), Fraction(0)) % 1

    def pairing(self, component: Sequence[int], form: Sequence[int]) -> Fraction:
        v = self.components.point_of(component)
        lam = self.forms.representative(form)
        return self.pair_point(v, lam)

    def is_perfect(self) -> bool:
        """Exhaustive check of both kernels (use for small groups)."""
        comps = list(self.components.group.elements())
        forms = list(self.forms.group.elements())
        if len(comps) != len(forms):
            return False
        for c in comps:
            if any(c) and all(self.pairing(c, f) == 0 for f in forms):
                return False
        for f in forms:
            if any(f) and all(self.pairing(c, f) == 0 for c in comps):
                return False
        return True


def cover_component_group(
    T: TorusWithInvolution, theta: Sequence[Sequence[int]], L: RationalLattice | None = None
) -> CoverComponentGroup:
    """Type-``J`` forms of ``T`` with the component group of the dual cover.

    ``theta`` acts on the dual torus and must be the transpose of ``sigma``.
    """
    th = as_matrix(theta)
    if transpose(th) != T.sigma:
        raise TorusError("involution on the dual torus is not the transpose of sigma")
    L = _check_overlattice(T, L)
    forms = antifixed_quotient(T, L)
    comps = fixed_component_group(th, dual_lattice(L))
    return CoverComponentGroup(forms, comps)


def dual_isogeny_kernel(T: TorusWithInvolution, L: RationalLattice) -> FinAbGroup:
    """Kernel of the dual cover, ``Y / L^dual``.

    Its invariant factors agree with those of ``L / X``.
    """
    L = _check_overlattice(T, L)
    return finite_quotient(T.rank, dual_lattice(L)).group


def overlattice_quotient(T: TorusWithInvolution, L: RationalLattice) -> FinAbGroup:
    """``L / X`` computed in the coordinates of ``L``."""
    L = _check_overlattice(T, L)
    return finite_quotient(T.rank, L.express(identity(T.rank))).group


def kaletha_cup_value(
    T: TorusWithInvolution, lam1: RationalVector | Sequence, k: int, L: RationalLattice | None = None
) -> TorusPoint:
    """Evaluated cup-product value ``k! * lambda_1(exp(pi i / k!))``.

    ``k`` must be positive and divisible by ``|L / X|``; the result is the
    point ``exp(pi i lambda_1)`` and so does not depend on ``k``.
    """
    L = _check_overlattice(T, L)
    lam = lam1 if isinstance(lam1, RationalVector) else RationalVector.from_fractions(lam1)
    size = overlattice_quotient(T, L).order
    if k <= 0 or k % size:
        raise TorusError(f"k must be a positive multiple of |J| = {size}")
    antifixed_quotient(T, L).coordinates(lam.entries)
    f = factorial(k)
    root = lam.scale(Fraction(1, 2 * f))  # lambda_1 evaluated at exp(pi i / k!)
    value = TorusPoint(root.scale(f))
    if value != TorusPoint(lam.scale(Fraction(1, 2))):
        raise TorusError("cup-product value disagrees with exp(pi i lambda_1)")
    return value


@dataclass(frozen=True)
class TorsionCertificate:
    holds: bool
    torsion: FinAbGroup
    antifixed: FinAbGroup
    images: tuple[tuple[int, ...], ...]


def torsion_equals_antifixed(T: TorusWithInvolution, L: RationalLattice | None = None) -> TorsionCertificate:
    """Compare ``torsion(L / (1 - sigma) X)`` with ``L^{-sigma} / (1 - sigma) X``.

    The inclusion ``L^{-sigma} -> L`` induces the candidate isomorphism; the
    certificate records the images of the anti-fixed generators.
    """
    L = _check_overlattice(T, L)
    n = T.rank
    one_minus = sub(identity(n), T.sigma)
    full = finite_quotient(n, L.express(tuple(Fraction(x) for x in col) for col in transpose(one_minus)) if n else [])
    af = antifixed_quotient(T, L)
    images = []
    ok = True
    for g in af.group.generators():
        rep = af.representative(g).entries
        coords = L.express([rep])[0]
        if not full.is_torsion(coords):
            ok = False
            images.append(())
            continue
        images.append(full.project(coords))
    if ok:
        ok = _is_isomorphism(af.group, full.group, images)
    return TorsionCertificate(ok, full.group, af.group, tuple(images))


def _is_isomorphism(dom: FinAbGroup, cod: FinAbGroup, images: Sequence[Sequence[int]]) -> bool:
    if dom.order != cod.order:
        return False
    for g, img in zip(dom.generators(), images):
        if cod.scale(dom.element_order(g), img) != cod.zero():
            return False
    seen = set()
    for x in dom.elements():
        y = cod.zero()
        for c, img in zip(x, images):
            y = cod.add(y, cod.scale(c, img))
        seen.add(y)
    return len(seen) == cod.order
