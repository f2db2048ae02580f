"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples of Python ints and act on column vectors.
Everything here is pure: values are immutable and every routine is
deterministic, so results can be compared for equality directly.

>>> snf(((2, 0), (0, 3))).diagonal
(1, 6)
>>> finite_quotient(2, [(2, 0), (0, 3)]).group
FinAbGroup(invariant_factors=(6,))
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd, lcm
from typing import Callable, Iterable, Iterator, Sequence

IntVector = tuple[int, ...]
IntMatrix = tuple[IntVector, ...]


class LatticeError(ValueError):
    """Raised when lattice data violates a documented precondition."""


# ---------------------------------------------------------------------------
# basic matrix helpers


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise LatticeError("ragged matrix")
    return out


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> IntMatrix:
    return tuple((0,) * n for _ in range(m))


def shape(a: Sequence[Sequence]) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def transpose(a: Sequence[Sequence]) -> tuple:
    if not a:
        return ()
    return tuple(zip(*a))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def neg(a: Sequence[Sequence]) -> tuple:
    return tuple(tuple(-x for x in row) for row in a)


def add(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def sub(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def det(a: Sequence[Sequence]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_inverse(a: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    """Inverse over the rationals by Gauss-Jordan; raises on singular input."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise LatticeError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def unimodular_inverse(a: Sequence[Sequence[int]]) -> IntMatrix:
    inv = rational_inverse(a)
    if any(x.denominator != 1 for row in inv for x in row):
        raise LatticeError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def is_involution(a: Sequence[Sequence[int]]) -> bool:
    return matmul(a, a) == identity(len(a))


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with unimodular ``U``, ``V`` and diagonal ``D``."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> IntVector:
        m, n = shape(self.D)
        return tuple(self.D[i][i] for i in range(min(m, n)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def snf(a: Sequence[Sequence[int]], ncols: int | None = None) -> SmithDecomposition:
    """Smith normal form of an integer matrix.

    The diagonal is non-negative, forms a divisibility chain and has its
    zeros last.  ``ncols`` fixes the column count for matrices with no rows.

    Examples
    ========

    >>> snf(((2, 0), (0, 3))).diagonal
    (1, 6)
    >>> snf(((0,),)).D
    ((0,),)
    """
    a = as_matrix(a)
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    A = [list(r) for r in a]
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in A:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        # pick the smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if done:
                # enforce divisibility against the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SmithDecomposition(as_matrix(U), as_matrix(A) if m else (), as_matrix(V))


def invariant_factors(a: Sequence[Sequence[int]]) -> IntVector:
    return snf(a).diagonal


# ---------------------------------------------------------------------------
# finite abelian groups


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group ``Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk``.

    Elements are coefficient tuples reduced entrywise.
    """

    invariant_factors: IntVector = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in fs):
            raise LatticeError("invariant factors must be at least 2")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise LatticeError("invariant factors must form a divisibility chain")
        object.__setattr__(self, "invariant_factors", fs)

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "FinAbGroup":
        """Canonical group for an arbitrary list of cyclic orders (zeros rejected)."""
        fs = [abs(int(f)) for f in factors]
        if any(f == 0 for f in fs):
            raise LatticeError("infinite cyclic factor in a finite group")
        d = snf(tuple(tuple(f if i == j else 0 for j in range(len(fs))) for i, f in enumerate(fs)))
        return cls(tuple(x for x in d.diagonal if x > 1))

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def zero(self) -> IntVector:
        return (0,) * self.rank

    def normalize(self, x: Sequence[int]) -> IntVector:
        if len(x) != self.rank:
            raise LatticeError("element has wrong length")
        return tuple(int(a) % d for a, d in zip(x, self.invariant_factors))

    def add(self, x: Sequence[int], y: Sequence[int]) -> IntVector:
        return self.normalize(tuple(a + b for a, b in zip(x, y)))

    def negate(self, x: Sequence[int]) -> IntVector:
        return self.normalize(tuple(-a for a in x))

    def scale(self, k: int, x: Sequence[int]) -> IntVector:
        return self.normalize(tuple(k * a for a in x))

    def element_order(self, x: Sequence[int]) -> int:
        x = self.normalize(x)
        out = 1
        for a, d in zip(x, self.invariant_factors):
            out = lcm(out, d // gcd(a, d))
        return out

    def elements(self) -> Iterator[IntVector]:
        return product(*(range(d) for d in self.invariant_factors))

    def generators(self) -> tuple[IntVector, ...]:
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    def is_elementary_two(self) -> bool:
        return all(d == 2 for d in self.invariant_factors)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


TRIVIAL_GROUP = FinAbGroup(())


def dual_group(a: FinAbGroup) -> tuple[FinAbGroup, Callable[[Sequence[int], Sequence[int]], Fraction]]:
    """Pontryagin dual of ``a`` with its perfect pairing into ``Q/Z``.

    The dual has the same invariant factors; the pairing is
    ``(x, chi) -> sum x_i chi_i / d_i mod 1``.

    >>> g, pair = dual_group(FinAbGroup((4,)))
    >>> pair((1,), (3,))
    Fraction(3, 4)
    """
    fs = a.invariant_factors

    def pairing(x: Sequence[int], chi: Sequence[int]) -> Fraction:
        return sum((Fraction(xi * ci, d) for xi, ci, d in zip(x, chi, fs)), Fraction(0)) % 1

    return FinAbGroup(fs), pairing


# ---------------------------------------------------------------------------
# rational vectors


@dataclass(frozen=True)
class RationalVector:
    """Rational vector stored as integer numerators over one positive denominator."""

    numerators: IntVector
    denominator: int = 1

    def __post_init__(self):
        if self.denominator == 0:
            raise LatticeError("zero denominator")
        nums = tuple(int(x) for x in self.numerators)
        den = int(self.denominator)
        if den < 0:
            nums, den = tuple(-x for x in nums), -den
        g = gcd(den, *nums) if nums else den
        object.__setattr__(self, "numerators", tuple(x // g for x in nums))
        object.__setattr__(self, "denominator", den // g)

    @classmethod
    def from_fractions(cls, xs: Iterable) -> "RationalVector":
        fr = [Fraction(x) for x in xs]
        den = lcm(1, *(f.denominator for f in fr))
        return cls(tuple(int(f * den) for f in fr), den)

    @classmethod
    def zero(cls, n: int) -> "RationalVector":
        return cls((0,) * n, 1)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.denominator) for x in self.numerators)

    def __len__(self) -> int:
        return len(self.numerators)

    def __add__(self, other: "RationalVector") -> "RationalVector":
        return RationalVector.from_fractions(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "RationalVector") -> "RationalVector":
        return RationalVector.from_fractions(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "RationalVector":
        return RationalVector(tuple(-x for x in self.numerators), self.denominator)

    def scale(self, c) -> "RationalVector":
        c = Fraction(c)
        return RationalVector(tuple(x * c.numerator for x in self.numerators), self.denominator * c.denominator)

    def transform(self, m: Sequence[Sequence[int]]) -> "RationalVector":
        return RationalVector(matvec(m, self.numerators), self.denominator)

    def pair(self, other: Sequence) -> Fraction:
        return sum((a * b for a, b in zip(self.entries, other)), Fraction(0))

    def is_integral(self) -> bool:
        return self.denominator == 1

    def mod_one(self) -> "RationalVector":
        d = self.denominator
        return RationalVector(tuple(x % d for x in self.numerators), d)

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.entries) + ")"


# ---------------------------------------------------------------------------
# sublattices and quotients


def row_basis(rows: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """A basis (as rows) of the integer row span of ``rows``."""
    rows = as_matrix(rows)
    if not rows:
        return ()
    dec = snf(rows, n)
    vinv = unimodular_inverse(dec.V)
    # row span of A = row span of D V^-1
    return tuple(tuple(d * x for x in vinv[i]) for i, d in enumerate(dec.diagonal) if d)


def kernel_basis(a: Sequence[Sequence[int]], n: int | None = None) -> IntMatrix:
    """Basis (rows) of the integer kernel {v : A v = 0}; it is saturated."""
    a = as_matrix(a)
    n = n if n is not None else (len(a[0]) if a else 0)
    if not a:
        return identity(n)
    dec = snf(a, n)
    vt = transpose(dec.V)
    r = dec.rank
    return tuple(tuple(vt[j]) for j in range(r, n))


def saturate(rows: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Basis of the saturation (rational span intersected with Z^n)."""
    rows = as_matrix(rows)
    if not rows:
        return ()
    # saturation = kernel of the kernel of the span
    perp = kernel_basis(rows, n)
    return kernel_basis(perp, n) if perp else identity(n)


def eigenlattice(sigma: Sequence[Sequence[int]], sign: int) -> IntMatrix:
    """Basis (rows) of ``{v in Z^n : sigma v = sign * v}``.

    >>> eigenlattice(((0, 1), (1, 0)), -1)
    ((1, -1),)
    """
    sigma = as_matrix(sigma)
    if sign not in (1, -1):
        raise LatticeError("sign must be +1 or -1")
    if not is_involution(sigma):
        raise LatticeError("matrix is not an involution")
    n = len(sigma)
    m = sub(sigma, tuple(tuple(sign * x for x in r) for r in identity(n)))
    basis = kernel_basis(m, n)
    return _canonical_basis(basis, n)


def _canonical_basis(rows: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Row Hermite normal form: a deterministic basis of the same lattice."""
    a = [list(r) for r in rows if any(r)]
    out = []
    col = 0
    while a and col < n:
        nz = [r for r in a if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                q = r[col] // p[col]
                for k in range(n):
                    r[k] -= q * p[k]
            nz = [r for r in nz if r[col]]
        p = nz[0]
        if p[col] < 0:
            for k in range(n):
                p[k] = -p[k]
        a = [r for r in a if r is not p and any(r)]
        out.append(p)
        col += 1
    # reduce entries above pivots
    for i, p in enumerate(out):
        pc = next(k for k in range(n) if p[k])
        for q in out[:i]:
            f = q[pc] // p[pc]
            for k in range(n):
                q[k] -= f * p[k]
    return tuple(tuple(r) for r in out)


def hermite_basis(rows: Sequence[Sequence[int]], n: int) -> IntMatrix:
    return _canonical_basis(rows, n)


@dataclass(frozen=True)
class LatticeQuotient:
    """The finitely generated group ``Z^n / <relations>``.

    ``group`` is its torsion part and ``free_rank`` its rank.  Elements are
    projected through the Smith basis: coordinates with diagonal entry ``d > 1``
    become torsion coordinates, those with ``d == 0`` free coordinates.
    """

    ambient_rank: int
    relations: IntMatrix
    group: FinAbGroup
    free_rank: int
    _V: IntMatrix = field(repr=False)
    _Vinv: IntMatrix = field(repr=False)
    _torsion_cols: tuple[int, ...] = field(repr=False)
    _free_cols: tuple[int, ...] = field(repr=False)

    def coordinates(self, x: Sequence[int]) -> IntVector:
        if len(x) != self.ambient_rank:
            raise LatticeError("vector has wrong length")
        return tuple(int(c) for c in matvec(transpose(self._V), x)) if self.ambient_rank else ()

    def project_full(self, x: Sequence[int]) -> tuple[IntVector, IntVector]:
        """(torsion coordinates, free coordinates) of the class of ``x``."""
        y = self.coordinates(x)
        tors = self.group.normalize(tuple(y[j] for j in self._torsion_cols))
        return tors, tuple(y[j] for j in self._free_cols)

    def project(self, x: Sequence[int]) -> IntVector:
        """Torsion coordinates of ``x``; raises if ``x`` has a free component."""
        tors, free = self.project_full(x)
        if any(free):
            raise LatticeError("vector is not torsion in the quotient")
        return tors

    def is_torsion(self, x: Sequence[int]) -> bool:
        return not any(self.project_full(x)[1])

    def lift(self, element: Sequence[int]) -> IntVector:
        """A representative in Z^n of a torsion element."""
        y = [0] * self.ambient_rank
        for j, c in zip(self._torsion_cols, self.group.normalize(element)):
            y[j] = c
        # x = V^-T y since coordinates are V^T x
        return tuple(matvec(transpose(self._Vinv), y))

    def contains(self, x: Sequence[int]) -> bool:
        tors, free = self.project_full(x)
        return not any(tors) and not any(free)


def finite_quotient(ambient_rank: int, relations: Iterable[Sequence[int]]) -> LatticeQuotient:
    """Present ``Z^n / <relations>`` via the Smith normal form.

    >>> q = finite_quotient(2, [(1, -1)])
    >>> q.group.order, q.free_rank
    (1, 1)
    """
    rel = tuple(tuple(int(x) for x in r) for r in relations)
    if any(len(r) != ambient_rank for r in rel):
        raise LatticeError("relation length does not match the ambient rank")
    n = ambient_rank
    if rel:
        dec = snf(rel, n)
        diag = list(dec.diagonal) + [0] * (n - len(dec.diagonal))
        V = dec.V
    else:
        diag = [0] * n
        V = identity(n)
    torsion_cols = tuple(j for j, d in enumerate(diag) if d > 1)
    free_cols = tuple(j for j, d in enumerate(diag) if d == 0)
    group = FinAbGroup(tuple(diag[j] for j in torsion_cols))
    return LatticeQuotient(
        n, rel, group, len(free_cols), V, unimodular_inverse(V) if n else (), torsion_cols, free_cols
    )


def torsion_subgroup(q: LatticeQuotient) -> FinAbGroup:
    """Torsion part of a finitely generated abelian group presentation."""
    return q.group


# ---------------------------------------------------------------------------
# rational lattices


def common_denominator(rows: Iterable[Iterable]) -> int:
    return lcm(1, *(Fraction(x).denominator for r in rows for x in r))


def rational_rows(rows: Iterable[Iterable]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


@dataclass(frozen=True)
class RationalLattice:
    """Full-rank lattice in Q^n given by basis rows, stored as ``basis / den``."""

    scaled_basis: IntMatrix
    denominator: int

    @classmethod
    def from_generators(cls, rows: Iterable[Iterable], n: int) -> "RationalLattice":
        rows = rational_rows(rows)
        den = common_denominator(rows)
        ints = [tuple(int(x * den) for x in r) for r in rows]
        basis = hermite_basis(ints, n)
        if len(basis) != n:
            raise LatticeError("generators do not span a full-rank lattice")
        # reduce the common denominator
        g = gcd(den, *(x for r in basis for x in r))
        return cls(tuple(tuple(x // g for x in r) for r in basis), den // g)

    @classmethod
    def standard(cls, n: int) -> "RationalLattice":
        return cls(identity(n), 1)

    @property
    def rank(self) -> int:
        return len(self.scaled_basis)

    @property
    def basis(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(Fraction(x, self.denominator) for x in r) for r in self.scaled_basis)

    @cached_property
    def _coord_matrix(self):
        return rational_inverse(transpose(self.basis))

    def coordinates(self, v: Sequence) -> tuple[Fraction, ...]:
        """Coordinates of ``v`` against the basis rows (rational)."""
        inv = self._coord_matrix
        return tuple(sum((a * Fraction(b) for a, b in zip(row, v)), Fraction(0)) for row in inv)

    def contains(self, v: Sequence) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(v))

    def index_over(self, sub: "RationalLattice") -> int:
        """Index ``[self : sub]`` for a sublattice ``sub``."""
        m = self.express(sub.basis)
        return abs(det(m))

    def express(self, rows: Iterable[Sequence]) -> IntMatrix:
        """Integer coordinate rows of vectors known to lie in the lattice."""
        out = []
        for r in rows:
            c = self.coordinates(r)
            if any(x.denominator != 1 for x in c):
                raise LatticeError("vector is not in the lattice")
            out.append(tuple(int(x) for x in c))
        return tuple(out)

    def is_stable(self, m: Sequence[Sequence[int]]) -> bool:
        return all(self.contains(matvec(m, b)) for b in self.basis)


def quotient_of_lattices(big: RationalLattice, small_rows: Iterable[Sequence]) -> LatticeQuotient:
    """``big / span(small_rows)`` presented in ``big``'s basis coordinates."""
    return finite_quotient(big.rank, big.express(small_rows))


def rational_sublattice_basis(rows: Iterable[Sequence], n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Basis of the Z-span of rational rows (not necessarily full rank)."""
    rows = rational_rows(rows)
    den = common_denominator(rows)
    ints = [tuple(int(x * den) for x in r) for r in rows]
    basis = hermite_basis(ints, n)
    return tuple(tuple(Fraction(x, den) for x in r) for r in basis)


def rational_eigenlattice(lattice: RationalLattice, sigma: Sequence[Sequence[int]], sign: int):
    """Basis of ``{v in lattice : sigma v = sign v}`` for a sigma-stable lattice."""
    if not lattice.is_stable(sigma):
        raise LatticeError("lattice is not stable under the involution")
    b = lattice.basis
    n = lattice.rank
    # matrix of sigma in lattice coordinates: columns are coords of sigma b_j
    cols = lattice.express(matvec(sigma, bj) for bj in b)
    local = transpose(cols)
    sub_basis = eigenlattice(local, sign)
    return tuple(tuple(sum((c * b[i][k] for i, c in enumerate(row)), Fraction(0)) for k in range(n)) for row in sub_basis)


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int]) -> IntVector | None:
    """Some integer solution ``x`` of ``A x = b``, or ``None``."""
    a = as_matrix(a)
    m = len(a)
    if m == 0:
        return ()
    n = len(a[0])
    dec = snf(a, n)
    ub = matvec(dec.U, b)
    y = [0] * n
    diag = dec.diagonal
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % d:
                return None
            y[i] = ub[i] // d
    return tuple(matvec(dec.V, y))


# ---------------------------------------------------------------------------
# homomorphisms of finite abelian groups


@dataclass(frozen=True)
class SubgroupQuotient:
    """``group / <elements>`` with its projection."""

    group: FinAbGroup
    quotient: FinAbGroup
    _q: LatticeQuotient = field(repr=False)

    def project(self, x: Sequence[int]) -> IntVector:
        return self._q.project(self.group.normalize(x))

    def lift(self, y: Sequence[int]) -> IntVector:
        return self.group.normalize(self._q.lift(y))


def quotient_by(group: FinAbGroup, elements: Iterable[Sequence[int]]) -> SubgroupQuotient:
    """Quotient of a finite abelian group by the subgroup generated by ``elements``."""
    k = group.rank
    rel = [tuple(d if i == j else 0 for j in range(k)) for i, d in enumerate(group.invariant_factors)]
    rel += [tuple(group.normalize(e)) for e in elements]
    q = finite_quotient(k, rel)
    return SubgroupQuotient(group, q.group, q)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by the images of the standard generators of ``domain``."""

    domain: FinAbGroup
    codomain: FinAbGroup
    images: tuple[IntVector, ...]

    def __post_init__(self):
        if len(self.images) != self.domain.rank:
            raise LatticeError("need one image per generator")
        imgs = tuple(self.codomain.normalize(x) for x in self.images)
        object.__setattr__(self, "images", imgs)
        for d, img in zip(self.domain.invariant_factors, imgs):
            if any(self.codomain.scale(d, img)):
                raise LatticeError("generator relations are not respected")

    def __call__(self, x: Sequence[int]) -> IntVector:
        out = self.codomain.zero()
        for c, img in zip(self.domain.normalize(x), self.images):
            out = self.codomain.add(out, self.codomain.scale(c, img))
        return out

    def kernel(self) -> tuple[IntVector, ...]:
        zero = self.codomain.zero()
        return tuple(x for x in self.domain.elements() if self(x) == zero)

    def image(self) -> frozenset[IntVector]:
        return frozenset(self(x) for x in self.domain.elements())

    def is_injective(self) -> bool:
        return len(self.kernel()) == 1

    def is_surjective(self) -> bool:
        return len(self.image()) == self.codomain.order

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and self.is_injective()

    def compose(self, first: "GroupHom") -> "GroupHom":
        """``self o first``."""
        if first.codomain != self.domain:
            raise LatticeError("homomorphisms are not composable")
        return GroupHom(first.domain, self.codomain, tuple(self(x) for x in first.images))
