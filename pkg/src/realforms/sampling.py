"""Seeded random instances for the property and acceptance suites.

Every sampler takes a ``random.Random`` and is deterministic given its state.
Rejection sampling is used where a structural condition must hold; the
conditions are stated in each docstring and never refer to the outcome of
the computation being tested.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .exact_lattice import (
    IntMatrix,
    RationalLattice,
    RationalVector,
    add,
    eigenlattice,
    identity,
    matmul,
    rational_inverse,
    solve_integer,
    transpose,
    unimodular_inverse,
)
from .packet_param import DualParameter, build_dL, strongly_orthogonal
from .root_datum import COMPLEX, IMAGINARY, REAL, BasedRootDatum, InvolutionState, cartan_type, cayley_imaginary
from .torus_forms import TorusWithInvolution, overlattice

SIMPLE_TYPES = (
    ("A", 1), ("A", 2), ("B", 2), ("C", 2), ("G", 2),
    ("A", 3), ("B", 3), ("C", 3),
    ("A", 4), ("B", 4), ("C", 4), ("D", 4),
)


def random_unimodular(rng: random.Random, n: int, steps: int = 4) -> IntMatrix:
    m = [list(r) for r in identity(n)]
    if n < 2:
        return tuple(tuple(r) for r in m)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        for k in range(n):
            m[i][k] += c * m[j][k]
    return tuple(tuple(r) for r in m)


def random_involution(rng: random.Random, n: int) -> IntMatrix:
    """A conjugate of a block sum of (1), (-1) and the swap (0 1; 1 0)."""
    d = [[0] * n for _ in range(n)]
    i = 0
    while i < n:
        if i + 1 < n and rng.random() < 0.3:
            d[i][i + 1] = d[i + 1][i] = 1
            i += 2
        else:
            d[i][i] = rng.choice((1, -1))
            i += 1
    p = random_unimodular(rng, n)
    return matmul(matmul(p, d), unimodular_inverse(p))


def random_overlattice(rng: random.Random, T: TorusWithInvolution, max_index: int = 64) -> RationalLattice:
    """Sigma-stable overlattice generated by the orbit of one random vector.

    Falls back to the trivial overlattice when the draw exceeds ``max_index``.
    """
    n = T.rank
    for _ in range(20):
        k = rng.choice((2, 2, 3, 4))
        v = [Fraction(rng.randint(0, k - 1), k) for _ in range(n)]
        sv = [sum(T.sigma[i][j] * v[j] for j in range(n)) for i in range(n)]
        L = overlattice(T, [v, sv])
        if L.index_over(RationalLattice.standard(n)) <= max_index:
            return L
    return RationalLattice.standard(n)


def _block_datum(blocks, torus: int) -> tuple[int, list, list]:
    n = sum(r for _, r in blocks) + torus
    roots, coroots = [], []
    off = 0
    for t, r in blocks:
        a, c = cartan_type(t, r)
        for i in range(r):
            roots.append(tuple([0] * off + list(a[i]) + [0] * (n - off - r)))
            coroots.append(tuple([0] * off + list(c[i]) + [0] * (n - off - r)))
        off += r
    return n, roots, coroots


def random_datum(rng: random.Random, max_rank: int) -> BasedRootDatum:
    """Products of simple types plus a central torus, simply connected or adjoint."""
    while True:
        blocks = []
        total = 0
        while rng.random() < 0.8:
            options = [t for t in SIMPLE_TYPES if t[1] + total <= max_rank]
            if not options:
                break
            t = rng.choice(options)
            blocks.append(t)
            total += t[1]
        torus = rng.randint(0, max_rank - total)
        if total + torus == 0:
            continue
        n, roots, coroots = _block_datum(blocks, torus)
        if blocks and rng.random() < 0.5:
            # adjoint coordinates: X spanned by the simple roots and the torus
            basis = [list(r) for r in roots] + [[int(j == i) for j in range(n)] for i in range(total, n)]
            b = transpose(basis)
            binv = rational_inverse(b)
            roots = [tuple(int(sum(binv[i][k] * r[k] for k in range(n))) for i in range(n)) for r in roots]
            coroots = [tuple(sum(b[k][i] * c[k] for k in range(n)) for i in range(n)) for c in coroots]
        return BasedRootDatum(n, tuple(roots), tuple(coroots))


def shelstad_rule_delta(state: InvolutionState, lam: RationalVector) -> tuple[int, ...] | None:
    """Singular noncompact imaginary roots orthogonal to every complex root of the Levi.

    Returns None when the Levi has real roots at this torus (the torus is not
    fundamental in the Levi) or when the selected roots are not strongly
    orthogonal.
    """
    d = state.datum
    levi = build_dL(DualParameter(state, lam, ()))
    if any(state.classify(i) == REAL for i in levi):
        return None
    cplx = [i for i in levi if state.classify(i) == COMPLEX]
    delta = tuple(
        i
        for i in levi
        if i < d.num_positive
        and state.classify(i) == IMAGINARY
        and i in state.noncompact
        and all(d.pairing(i, j) == 0 for j in cplx)
    )
    if not all(strongly_orthogonal(d, a, b) for a, b in itertools.combinations(delta, 2)):
        return None
    return delta


def _try_tempered(rng: random.Random, max_rank: int) -> DualParameter | None:
    d = random_datum(rng, max_rank)
    n = d.rank
    # y = exp(pi i v) with <alpha, v> integral; its grading is the parity of <alpha, v>
    v = RationalVector.zero(n)
    for _ in range(100):
        den = rng.choice((1, 2, 2, 3, 4))
        w = RationalVector(tuple(rng.randint(-3, 3) for _ in range(n)), den)
        if all(w.pair(r).denominator == 1 for r in d.roots):
            v = w
            break
    nc = frozenset(i for i, r in enumerate(d.roots) if v.pair(r) % 2 == 1)
    state = InvolutionState(d, identity(n), nc)
    for _ in range(rng.randint(0, 4)):
        cand = [i for i in state.noncompact if i < d.num_positive and state.classify(i) == IMAGINARY]
        if not cand:
            break
        state, _ = cayley_imaginary(state, rng.choice(sorted(cand)))
    # tempered: lambda in v + Y with theta^T lambda = -lambda
    a = add(identity(n), transpose(state.theta))
    rhs = [-x for x in v.transform(a).entries]
    if any(x.denominator != 1 for x in rhs):
        return None
    y = solve_integer(a, [int(x) for x in rhs])
    if y is None:
        return None
    lam = v + RationalVector(y, 1)
    anti = eigenlattice(transpose(state.theta), -1)
    if anti and rng.random() < 0.7:
        u = [0] * n
        for b in anti:
            c = rng.choice((0, 0, 1, -1, 2))
            u = [x + c * e for x, e in zip(u, b)]
        lam = lam + RationalVector(tuple(u), 1)
    delta = shelstad_rule_delta(state, lam)
    if delta is None:
        return None
    return DualParameter(state, lam, delta)


def random_tempered_parameter(rng: random.Random, max_rank: int = 4) -> DualParameter:
    """A tempered singular parameter with the Shelstad set chosen by ``shelstad_rule_delta``.

    The pair (y, theta) starts from y = exp(pi i v) on a torus with theta = 1
    and is moved by random noncompact imaginary Cayley transforms, so the
    grading is always realized by an actual element.
    """
    while True:
        p = _try_tempered(rng, max_rank)
        if p is not None:
            return p
