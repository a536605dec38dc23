"""Minimal-degree polynomial kernel vectors and Kronecker indices.

The right kernel of ``R`` over Q(x) is parametrised by its free
coordinates: after reduction to echelon form every kernel vector is
``eta = (F c, c)`` (up to column order) where ``c`` holds the free
entries.  A polynomial ``eta`` therefore has polynomial ``c``, and writing
``F = G/g`` with ``G`` polynomial the pivot entries are ``G c / g``.  For a
degree cap ``delta`` the conditions ``G c = 0 mod g`` and
``deg(G c) <= delta + deg g`` are linear in the coefficients of ``c``, so
each step of the degree sweep is a kernel computation over Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from flint import fmpq, fmpq_mat, fmpq_poly, fmpz_mat, nmod_mat, nmod_poly

from .algebra import Poly, RatFunc, poly_lcm
from .ratmat import RatMatrix, _poly_rank

__all__ = [
    "KroneckerIndices",
    "NullspaceBasis",
    "NoKernelError",
    "min_kernel_vector",
    "kronecker_indices",
    "normalize_vector",
    "vector_degree",
]


class NoKernelError(ValueError):
    """The matrix has full column rank."""


@dataclass(frozen=True)
class KroneckerIndices:
    indices: tuple[int, ...]

    def __post_init__(self):
        if list(self.indices) != sorted(self.indices):
            raise ValueError("Kronecker indices must be non-decreasing")

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    @property
    def total(self) -> int:
        return sum(self.indices)


@dataclass(frozen=True)
class NullspaceBasis:
    vectors: tuple[tuple[Poly, ...], ...]

    @property
    def degrees(self) -> list[int]:
        return [vector_degree(v) for v in self.vectors]


def vector_degree(v: Sequence[Poly]) -> int:
    d = max((e.degree for e in v), default=-math.inf)
    if d == -math.inf:
        raise ValueError("degree of the zero vector")
    return int(d)


def normalize_vector(v: Sequence[Poly]) -> tuple[Poly, ...]:
    """Integer, content-free, with the last nonzero entry positive-leading.

    A common polynomial factor is divided out as well, so the result is
    primitive over Z[x].
    """
    g = Poly()
    for e in v:
        if e:
            g = g.gcd(e)
    if g.is_zero():
        raise ValueError("cannot normalise the zero vector")
    if g.degree > 0:
        v = [e.exquo(g) for e in v]
    den = 1
    for e in v:
        for c in e.coeffs():
            den = math.lcm(den, c.denominator)
    ints = [[int(c * den) for c in e.coeffs()] for e in v]
    content = math.gcd(*(c for cs in ints for c in cs))
    last = next(e for e in reversed(v) if e)
    sign = -1 if last.lc < 0 else 1
    return tuple(Poly([sign * c // content for c in cs]) for cs in ints)


# -- parametrisation ---------------------------------------------------------

@dataclass
class _Param:
    ncols: int
    pivots: list[int]
    free: list[int]
    G: list[list[fmpq_poly]]  # len(pivots) x len(free)
    g: fmpq_poly

    @property
    def nullity(self) -> int:
        return len(self.free)


def _parametrise(R: RatMatrix) -> _Param:
    E, pivots = R.rref()
    free = [j for j in range(R.cols) if j not in pivots]
    if not free:
        raise NoKernelError("matrix has full column rank; no kernel")
    F = [[-E[i, j] for j in free] for i in range(len(pivots))]
    g = poly_lcm(e.den for r in F for e in r if e)
    G = [[(g * e).as_poly()._p for e in r] for r in F]
    return _Param(R.cols, pivots, free, G, g._p)


def _assemble(P: _Param, c: Sequence[fmpq_poly]) -> list[Poly]:
    eta = [Poly() for _ in range(P.ncols)]
    for k, j in enumerate(P.free):
        eta[j] = Poly._wrap(c[k])
    for i, j in enumerate(P.pivots):
        acc = fmpq_poly()
        for k in range(P.nullity):
            if c[k] and P.G[i][k]:
                acc += P.G[i][k] * c[k]
        q, r = divmod(acc, P.g)
        assert r.is_zero()
        eta[j] = Poly._wrap(q)
    return eta


def _cleared_columns(P: _Param) -> list[tuple[int, list[fmpq_poly]]]:
    """Per free column: (degree, c) for the denominator-free kernel vector."""
    out = []
    for k in range(P.nullity):
        col = [RatFunc._make(P.G[i][k], P.g) for i in range(len(P.pivots))]
        h = poly_lcm(e.den for e in col if e)
        deg = max([h.degree] + [(h * e).as_poly().degree for e in col if e])
        c = [fmpq_poly() for _ in range(P.nullity)]
        c[k] = h._p
        out.append((int(deg), c))
    return out


def _equations(P: _Param, delta: int) -> fmpz_mat | None:
    """Integer matrix whose kernel is the ``c`` with deg eta <= delta (None if unconstrained)."""
    nf = P.nullity
    dg = P.g.degree()
    nunk = nf * (delta + 1)
    xpoly = fmpq_poly([0, 1])
    rows: list[list[fmpq]] = []
    # equation blocks per pivot row: remainder coefficients and high coefficients
    for i in range(len(P.pivots)):
        top = max((P.G[i][k].degree() for k in range(nf)), default=-1) + delta
        nhigh = max(0, top - (delta + dg))
        block = [[fmpq(0)] * nunk for _ in range(dg + nhigh)]
        for k in range(nf):
            gik = P.G[i][k]
            if gik.is_zero():
                continue
            rem = gik % P.g if dg > 0 else None
            for e in range(delta + 1):
                col = k * (delta + 1) + e
                if e and rem is not None:
                    rem = (rem * xpoly) % P.g
                if rem is not None:
                    for t, cf in enumerate(rem.coeffs()):
                        block[t][col] = cf
                # coefficient t of gik * x^e is coefficient t - e of gik
                pcs = gik.coeffs()
                for t in range(max(delta + dg + 1, e), len(pcs) + e):
                    block[dg + t - (delta + dg + 1)][col] = pcs[t - e]
        rows.extend(r for r in block if any(r))
    if not rows:
        return None
    return fmpq_mat(rows).numer_denom()[0]


_PRIME = (1 << 62) - 57


def _reduce_mod(f: fmpq_poly, p: int) -> nmod_poly | None:
    cs = []
    for c in f.coeffs():
        q = int(c.q)
        if q % p == 0:
            return None
        cs.append(int(c.p) * pow(q, -1, p) % p)
    return nmod_poly(cs, p)


def _feasible_mod(P: _Param, delta: int, p: int = _PRIME) -> bool | None:
    """Modular version of ``_feasible``.  A False answer is exact (rank can
    only drop mod p); None means p divides a denominator."""
    nf = P.nullity
    nunk = nf * (delta + 1)
    g = _reduce_mod(P.g, p)
    if g is None or g.degree() != P.g.degree():
        return None
    dg = g.degree()
    xpoly = nmod_poly([0, 1], p)
    rows: list[list[int]] = []
    for i in range(len(P.pivots)):
        top = max((P.G[i][k].degree() for k in range(nf)), default=-1) + delta
        nhigh = max(0, top - (delta + dg))
        block = [[0] * nunk for _ in range(dg + nhigh)]
        for k in range(nf):
            if P.G[i][k].is_zero():
                continue
            gik = _reduce_mod(P.G[i][k], p)
            if gik is None:
                return None
            rem = gik % g if dg > 0 else None
            pcs = [int(c) for c in gik.coeffs()]
            for e in range(delta + 1):
                col = k * (delta + 1) + e
                if e and rem is not None:
                    rem = (rem * xpoly) % g
                if rem is not None:
                    for t, cf in enumerate(rem.coeffs()):
                        block[t][col] = int(cf)
                for t in range(max(delta + dg + 1, e), len(pcs) + e):
                    block[dg + t - (delta + dg + 1)][col] = pcs[t - e]
        rows.extend(r for r in block if any(r))
    if not rows:
        return True
    return nmod_mat(rows, p).rank() < nunk


def _feasible(P: _Param, delta: int) -> bool:
    A = _equations(P, delta)
    return A is None or A.rank() < P.nullity * (delta + 1)


def _least_feasible(P: _Param, lo: int, hi: int, test) -> int:
    # the solution spaces grow with delta, so the least feasible degree bisects
    while lo < hi:
        mid = (lo + hi) // 2
        if test(P, mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _solution_space(P: _Param, delta: int) -> list[list[fmpq_poly]]:
    """Q-basis (reduced echelon, hence canonical) of the ``c`` with deg eta <= delta."""
    nf = P.nullity
    nunk = nf * (delta + 1)
    A = _equations(P, delta)
    if A is None:
        basis = [[fmpq(int(a == b)) for a in range(nunk)] for b in range(nunk)]
    else:
        basis = _integer_kernel(A, nunk)
    return [[fmpq_poly(vec[k * (delta + 1):(k + 1) * (delta + 1)]) for k in range(nf)] for vec in basis]


def _integer_kernel(A: fmpz_mat, nunk: int) -> list[list[fmpq]]:
    """Kernel as rows of a reduced echelon basis."""
    K, nullity = A.nullspace()
    if nullity == 0:
        return []
    B = fmpq_mat([[K[i, j] for i in range(nunk)] for j in range(nullity)])
    E, rank = B.rref()
    return [[E[i, j] for j in range(nunk)] for i in range(rank)]


# -- public API --------------------------------------------------------------

def min_kernel_vector(R: RatMatrix) -> tuple[Poly, ...]:
    """A nonzero polynomial kernel vector of least degree, normalised."""
    P = _parametrise(R)
    cleared = _cleared_columns(P)
    if P.nullity == 1:
        return normalize_vector(_assemble(P, cleared[0][1]))
    hi = min(d for d, _ in cleared)
    fast = _least_feasible(P, 0, hi, lambda P, d: _feasible_mod(P, d) is not False)
    sols = _solution_space(P, fast)
    if not sols:
        # unlucky prime: redo the sweep exactly above the modular answer
        sols = _solution_space(P, _least_feasible(P, fast + 1, hi, _feasible))
    return normalize_vector(_assemble(P, sols[0]))


def kronecker_indices(R: RatMatrix) -> tuple[KroneckerIndices, NullspaceBasis]:
    """Greedy minimal basis of the right kernel and its column degrees."""
    P = _parametrise(R)
    cleared = _cleared_columns(P)
    cap = max(d for d, _ in cleared)
    chosen_c: list[list[Poly]] = []
    vectors: list[tuple[Poly, ...]] = []
    indices: list[int] = []
    delta = 0
    while len(vectors) < P.nullity:
        if delta > cap:
            raise AssertionError("degree sweep exceeded the cleared-basis cap")
        for c in _solution_space(P, delta):
            cand = [Poly._wrap(e) for e in c]
            if _poly_rank([list(v) for v in chosen_c] + [cand]) == len(chosen_c) + 1:
                chosen_c.append(cand)
                vec = normalize_vector(_assemble(P, c))
                vectors.append(vec)
                indices.append(vector_degree(vec))
                if len(vectors) == P.nullity:
                    break
        delta += 1
    return KroneckerIndices(tuple(indices)), NullspaceBasis(tuple(vectors))
