"""Based root data with an involution, gradings and Cayley transforms.

Roots are rows in character coordinates ``X``, coroots rows in cocharacter
coordinates ``Y``; the pairing is the dot product.  An involution ``theta``
acts on ``X`` (column vectors) and its transpose acts on ``Y``.

Cayley transforms keep the lattice and replace ``theta`` by ``s_alpha theta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact_lattice import (
    IntMatrix,
    IntVector,
    RationalVector,
    as_matrix,
    dot,
    identity,
    is_involution,
    matmul,
    matvec,
    rational_inverse,
    transpose,
)
from .torus_forms import TorusPoint

REAL, IMAGINARY, COMPLEX = "real", "imaginary", "complex"
MAX_ROOTS = 2000


class RootDatumError(ValueError):
    """Invalid root datum, involution or Cayley request."""


@dataclass(frozen=True)
class Root:
    index: int
    root: IntVector
    coroot: IntVector
    simple_coordinates: IntVector

    @property
    def is_positive(self) -> bool:
        return any(c > 0 for c in self.simple_coordinates)


@dataclass(frozen=True)
class BasedRootDatum:
    """Root datum generated from simple roots and coroots.

    ``roots`` lists positive roots by height, then their negatives in the same
    order, so simple root ``i`` has index ``i``.
    """

    rank: int
    simple_roots: IntMatrix
    simple_coroots: IntMatrix
    roots: tuple[IntVector, ...] = field(init=False)
    coroots: tuple[IntVector, ...] = field(init=False)
    simple_coords: tuple[IntVector, ...] = field(init=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sr = as_matrix(self.simple_roots)
        sc = as_matrix(self.simple_coroots)
        if len(sr) != len(sc):
            raise RootDatumError("simple roots and coroots differ in number")
        if any(len(r) != self.rank for r in sr) or any(len(c) != self.rank for c in sc):
            raise RootDatumError("simple roots or coroots have the wrong length")
        object.__setattr__(self, "simple_roots", sr)
        object.__setattr__(self, "simple_coroots", sc)
        cm = self.cartan_matrix
        for i, row in enumerate(cm):
            for j, a in enumerate(row):
                if i == j and a != 2:
                    raise RootDatumError("simple root does not pair to 2 with its coroot")
                if i != j and a not in (0, -1, -2, -3):
                    raise RootDatumError(f"Cartan matrix entry {a} out of range")
                if i != j and (a == 0) != (cm[j][i] == 0):
                    raise RootDatumError("Cartan matrix is not symmetrizable")
        roots, coroots, coords = _generate(sr, sc)
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "coroots", coroots)
        object.__setattr__(self, "simple_coords", coords)
        object.__setattr__(self, "_index", {r: i for i, r in enumerate(roots)})

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_roots)

    @property
    def cartan_matrix(self) -> IntMatrix:
        return tuple(tuple(dot(a, c) for c in self.simple_coroots) for a in self.simple_roots)

    @property
    def num_positive(self) -> int:
        return len(self.roots) // 2

    def index_of(self, root: Sequence[int]) -> int:
        try:
            return self._index[tuple(root)]
        except KeyError:
            raise RootDatumError(f"{tuple(root)} is not a root") from None

    def is_root(self, v: Sequence[int]) -> bool:
        return tuple(v) in self._index

    def negative(self, i: int) -> int:
        p = self.num_positive
        return i + p if i < p else i - p

    def root(self, i: int) -> Root:
        if not 0 <= i < len(self.roots):
            raise RootDatumError(f"unknown root index {i}")
        return Root(i, self.roots[i], self.coroots[i], self.simple_coords[i])

    def all_roots(self) -> tuple[Root, ...]:
        return tuple(self.root(i) for i in range(len(self.roots)))

    def pairing(self, i: int, j: int) -> int:
        """``<alpha_i, coroot_j>``."""
        return dot(self.roots[i], self.coroots[j])

    def dual(self) -> "BasedRootDatum":
        return BasedRootDatum(self.rank, self.simple_coroots, self.simple_roots)


def _generate(sr: IntMatrix, sc: IntMatrix):
    k = len(sr)
    start = [(sr[i], sc[i], tuple(int(i == j) for j in range(k))) for i in range(k)]
    seen = {s[0]: s for s in start}
    frontier = list(start)
    while frontier:
        nxt = []
        for r, c, co in frontier:
            for i in range(k):
                p = dot(r, sc[i])
                q = dot(sr[i], c)
                r2 = tuple(a - p * b for a, b in zip(r, sr[i]))
                c2 = tuple(a - q * b for a, b in zip(c, sc[i]))
                co2 = tuple(a - (p if j == i else 0) for j, a in enumerate(co))
                if r2 not in seen:
                    if len(seen) >= MAX_ROOTS:
                        raise RootDatumError("root system is not finite")
                    seen[r2] = (r2, c2, co2)
                    nxt.append(seen[r2])
                elif seen[r2][1] != c2:
                    raise RootDatumError("coroot assignment is inconsistent")
        frontier = nxt
    items = list(seen.values())
    for r, c, co in items:
        if not (all(x >= 0 for x in co) or all(x <= 0 for x in co)):
            raise RootDatumError("root is neither positive nor negative")
    pos = sorted((it for it in items if sum(it[2]) > 0), key=lambda it: (sum(it[2]), tuple(-x for x in it[2])))
    neg_map = {it[0]: it for it in items}
    neg = [neg_map[tuple(-x for x in it[0])] for it in pos]
    ordered = pos + neg
    return (
        tuple(it[0] for it in ordered),
        tuple(it[1] for it in ordered),
        tuple(it[2] for it in ordered),
    )


# ---------------------------------------------------------------------------
# reflections


def weyl_reflection(datum: BasedRootDatum, alpha: int) -> IntMatrix:
    """Matrix of ``s_alpha(x) = x - <x, coroot> alpha`` on ``X``.

    >>> a2 = BasedRootDatum(2, ((2, -1), (-1, 2)), ((1, 0), (0, 1)))
    >>> matvec(weyl_reflection(a2, 0), a2.roots[1]) == a2.roots[2]
    True
    """
    a = datum.roots[alpha]
    c = datum.coroots[alpha]
    n = datum.rank
    return tuple(tuple(int(i == j) - a[i] * c[j] for j in range(n)) for i in range(n))


def root_subsystem(datum: BasedRootDatum, predicate: Callable[[Root], bool]) -> tuple[int, ...]:
    """Indices of roots satisfying ``predicate``."""
    return tuple(r.index for r in datum.all_roots() if predicate(r))


def alpha_minus_one(datum: BasedRootDatum, alpha: int) -> TorusPoint:
    """The point ``coroot(-1) = exp(pi i coroot)`` of the torus with cocharacters ``Y``."""
    return TorusPoint(RationalVector(datum.coroots[alpha], 2))


# ---------------------------------------------------------------------------
# involutions and gradings


def _theta_permutes(datum: BasedRootDatum, theta: IntMatrix) -> bool:
    tt = transpose(theta)
    for i in range(len(datum.roots)):
        img = matvec(theta, datum.roots[i])
        if not datum.is_root(img):
            return False
        j = datum.index_of(img)
        if tuple(matvec(tt, datum.coroots[i])) != datum.coroots[j]:
            return False
    return True


def classify(datum: BasedRootDatum, theta: IntMatrix, i: int) -> str:
    r = datum.roots[i]
    img = matvec(theta, r)
    if img == r:
        return IMAGINARY
    if img == tuple(-x for x in r):
        return REAL
    return COMPLEX


def imaginary_roots(datum: BasedRootDatum, theta: IntMatrix) -> tuple[int, ...]:
    return tuple(i for i in range(len(datum.roots)) if classify(datum, theta, i) == IMAGINARY)


def real_roots(datum: BasedRootDatum, theta: IntMatrix) -> tuple[int, ...]:
    return tuple(i for i in range(len(datum.roots)) if classify(datum, theta, i) == REAL)


def _f2_solve(rows: list[list[int]], rhs: list[int], nvars: int) -> list[int] | None:
    """Solve a linear system over F_2; free variables are set to 0."""
    a = [[x % 2 for x in r] + [b % 2] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(nvars):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                a[i] = [x ^ y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    if any(not any(row[:nvars]) and row[nvars] for row in a):
        return None
    sol = [0] * nvars
    for i, c in enumerate(piv_cols):
        sol[c] = a[i][nvars]
    return sol


def imaginary_simple_system(datum: BasedRootDatum, imag: Iterable[int]) -> tuple[int, ...]:
    """Simple roots of the imaginary subsystem with positivity inherited from the datum."""
    imag = set(imag)
    pos = [i for i in imag if i < datum.num_positive]
    pos_vecs = {datum.roots[i] for i in pos}
    simple = []
    for i in pos:
        r = datum.roots[i]
        decomposable = any(
            tuple(a - b for a, b in zip(r, datum.roots[j])) in pos_vecs for j in pos if j != i
        )
        if not decomposable:
            simple.append(i)
    return tuple(sorted(simple))


def _coordinates_in(datum: BasedRootDatum, basis: Sequence[int], i: int) -> list[int]:
    """Integer coordinates of root ``i`` against the simple roots ``basis``."""
    k = len(basis)
    vecs = [datum.simple_coords[b] for b in basis]
    target = datum.simple_coords[i]
    # least squares via normal equations is exact here since the basis is independent
    g = [[sum(x * y for x, y in zip(vecs[a], vecs[b])) for b in range(k)] for a in range(k)]
    rhs = [sum(x * y for x, y in zip(vecs[a], target)) for a in range(k)]
    inv = rational_inverse(g)
    coeff = [sum((inv[a][b] * rhs[b] for b in range(k)), Fraction(0)) for a in range(k)]
    if any(c.denominator != 1 for c in coeff):
        raise RootDatumError("root is not in the span of the simple system")
    back = [sum(int(coeff[a]) * vecs[a][j] for a in range(k)) for j in range(len(target))]
    if back != list(target):
        raise RootDatumError("root is not in the span of the simple system")
    return [int(c) for c in coeff]


def extend_grading(
    datum: BasedRootDatum, theta: IntMatrix, constraints: dict[int, bool]
) -> frozenset[int] | None:
    """Noncompact set of a multiplicative grading extending ``constraints``.

    ``constraints`` maps imaginary root indices to ``True`` (noncompact) or
    ``False`` (compact).  Unconstrained simple directions default to compact.
    Returns ``None`` when no multiplicative grading matches.
    """
    imag = imaginary_roots(datum, theta)
    if not imag:
        return frozenset() if not constraints else None
    simple = imaginary_simple_system(datum, imag)
    coords = {i: _coordinates_in(datum, simple, i) for i in imag}
    rows, rhs = [], []
    for i, nc in constraints.items():
        if i not in coords:
            raise RootDatumError(f"root {i} is not imaginary")
        rows.append(coords[i])
        rhs.append(1 if nc else 0)
    sol = _f2_solve(rows, rhs, len(simple))
    if sol is None:
        return None
    return frozenset(i for i in imag if sum(c * s for c, s in zip(coords[i], sol)) % 2)


@dataclass(frozen=True)
class InvolutionState:
    """A root datum with involution ``theta`` on ``X`` and a grading.

    ``noncompact`` holds the indices of the noncompact imaginary roots and is
    closed under negation.
    """

    datum: BasedRootDatum
    theta: IntMatrix
    noncompact: frozenset[int]

    def __post_init__(self):
        th = as_matrix(self.theta)
        if len(th) != self.datum.rank or any(len(r) != self.datum.rank for r in th):
            raise RootDatumError("involution has the wrong size")
        if not is_involution(th):
            raise RootDatumError("matrix is not an involution")
        if not _theta_permutes(self.datum, th):
            raise RootDatumError("involution does not preserve the root datum")
        object.__setattr__(self, "theta", th)
        nc = set(int(i) for i in self.noncompact)
        nc |= {self.datum.negative(i) for i in nc}
        imag = set(imaginary_roots(self.datum, th))
        if not nc <= imag:
            raise RootDatumError("grading marks a non-imaginary root")
        if extend_grading(self.datum, th, {i: i in nc for i in imag}) is None:
            raise RootDatumError("grading is not multiplicative on the imaginary roots")
        object.__setattr__(self, "noncompact", frozenset(nc))

    def classify(self, i: int) -> str:
        self.datum.root(i)
        return classify(self.datum, self.theta, i)

    def is_noncompact(self, i: int) -> bool:
        return i in self.noncompact

    def imaginary(self) -> tuple[int, ...]:
        return imaginary_roots(self.datum, self.theta)

    def real(self) -> tuple[int, ...]:
        return real_roots(self.datum, self.theta)

    def imaginary_noncompact(self, among: Iterable[int] | None = None) -> tuple[int, ...]:
        pool = sorted(self.noncompact if among is None else set(among) & self.noncompact)
        return tuple(pool)


def classify_root(state: InvolutionState, alpha: int) -> str:
    """``real`` if theta negates the root, ``imaginary`` if it fixes it, else ``complex``."""
    return state.classify(alpha)


@dataclass(frozen=True)
class CayleyStep:
    root: int
    kind: str
    point: TorusPoint


def _flipped(datum: BasedRootDatum, alpha: int, beta: int) -> bool:
    """Grading change of a root orthogonal to ``alpha`` across a Cayley transform.

    The factor is ``(-1)^<beta, coroot alpha>`` times ``-1`` when
    ``alpha + beta`` is a root (orthogonal but not strongly orthogonal).
    """
    sign = datum.pairing(beta, alpha) % 2
    if datum.is_root(tuple(a + b for a, b in zip(datum.roots[alpha], datum.roots[beta]))):
        sign ^= 1
    return bool(sign)


def cayley_imaginary(state: InvolutionState, alpha: int) -> tuple[InvolutionState, CayleyStep]:
    """Cayley transform through a noncompact imaginary root.

    >>> a1 = BasedRootDatum(1, ((2,),), ((1,),))
    >>> new, step = cayley_imaginary(InvolutionState(a1, ((1,),), frozenset({0})), 0)
    >>> new.theta, new.classify(0)
    (((-1,),), 'real')
    """
    kind = state.classify(alpha)
    if kind != IMAGINARY:
        raise RootDatumError(f"root {alpha} is {kind}, not imaginary")
    if alpha not in state.noncompact:
        raise RootDatumError(f"root {alpha} is compact")
    d = state.datum
    theta = matmul(weyl_reflection(d, alpha), state.theta)
    new_imag = imaginary_roots(d, theta)
    nc = set()
    for b in new_imag:
        if classify(d, state.theta, b) != IMAGINARY:
            raise RootDatumError("imaginary Cayley transform produced a new imaginary root")
        if (b in state.noncompact) != _flipped(d, alpha, b):
            nc.add(b)
    new = InvolutionState(d, theta, frozenset(nc))
    return new, CayleyStep(alpha, IMAGINARY, alpha_minus_one(d, alpha))


def cayley_real(state: InvolutionState, beta: int) -> tuple[InvolutionState, CayleyStep]:
    """Inverse Cayley transform through a real root; the root becomes noncompact."""
    kind = state.classify(beta)
    if kind != REAL:
        raise RootDatumError(f"root {beta} is {kind}, not real")
    d = state.datum
    theta = matmul(weyl_reflection(d, beta), state.theta)
    constraints = {beta: True, d.negative(beta): True}
    for b in imaginary_roots(d, theta):
        if b in constraints:
            continue
        if classify(d, state.theta, b) == IMAGINARY:
            constraints[b] = (b in state.noncompact) != _flipped(d, beta, b)
    nc = extend_grading(d, theta, constraints)
    if nc is None:
        raise RootDatumError("no grading extends the transported one")
    return InvolutionState(d, theta, nc), CayleyStep(beta, REAL, alpha_minus_one(d, beta))


# ---------------------------------------------------------------------------
# standard data


def cartan_type(name: str, rank: int) -> tuple[IntMatrix, IntMatrix]:
    """Simple roots and coroots of a simply connected datum with ``X`` = weights.

    Simple roots are the Cartan matrix rows, simple coroots the unit vectors.
    """
    n = rank
    c = [[2 * int(i == j) for j in range(n)] for i in range(n)]
    if name in ("A", "B", "C", "D") and n >= 1:
        for i in range(n - 1):
            c[i][i + 1] = c[i + 1][i] = -1
    if name == "B" and n >= 2:
        c[n - 2][n - 1] = -2  # short last root
    elif name == "C" and n >= 2:
        c[n - 1][n - 2] = -2  # long last root
    elif name == "D" and n >= 3:
        c[n - 2][n - 1] = c[n - 1][n - 2] = 0
        c[n - 3][n - 1] = c[n - 1][n - 3] = -1
    elif name == "G" and n == 2:
        c = [[2, -1], [-3, 2]]
    elif name not in ("A", "B", "C", "D"):
        raise RootDatumError(f"unsupported type {name}{rank}")
    # row i of simple roots is (<alpha_i, coroot_j>)_j
    return tuple(tuple(c[i][j] for j in range(n)) for i in range(n)), identity(n)
