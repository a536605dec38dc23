"""Iterates of a pseudo-linear map and the polynomial relations between them.

``theta`` is either ``p(x) d/dx + T`` or ``T * sigma`` acting on column
vectors over Q(x).  Starting from a polynomial vector ``a`` the iterates
``a, theta(a), theta^2(a), ...`` become linearly dependent after ``rho``
steps; the relation with polynomial coefficients of least degree is a
minimal-degree kernel vector of the Krylov matrix.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

from .algebra import Poly, RatFunc, as_ratfunc, poly_lcm
from .nullspace import min_kernel_vector, vector_degree
from .ore import OreKind, OrePoly
from .ratmat import RatMatrix, mcmillan_degree

__all__ = [
    "PseudoLinearMap",
    "KrylovSeed",
    "Relation",
    "theta_apply",
    "krylov_matrix",
    "krylov_rank",
    "min_relation",
    "relation_at_order",
    "krylov_mcmillan_check",
    "RelationError",
]


class RelationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PseudoLinearMap:
    kind: OreKind
    T: RatMatrix

    def __post_init__(self):
        if self.T.rows != self.T.cols:
            raise ValueError(f"T must be square, got {self.T.shape}")

    @property
    def n(self) -> int:
        return self.T.rows

    @functools.cached_property
    def degmm_T(self) -> int:
        return mcmillan_degree(self.T)

    def __call__(self, v: Sequence[RatFunc]) -> list[RatFunc]:
        return theta_apply(self, v)


@dataclass(frozen=True)
class KrylovSeed:
    a: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(as_ratfunc(e).as_poly() for e in self.a))

    @property
    def d_a(self) -> int:
        d = max((e.degree for e in self.a), default=float("-inf"))
        if d == float("-inf"):
            raise ValueError("zero seed has no degree")
        return int(d)

    def is_zero(self) -> bool:
        return not any(self.a)

    def vector(self) -> list[RatFunc]:
        return [RatFunc._coerce(e) for e in self.a]


@dataclass(frozen=True)
class Relation:
    order: int
    eta: tuple[Poly, ...]

    @property
    def degree(self) -> int:
        return vector_degree(self.eta)

    def operator(self, kind: OreKind) -> OrePoly:
        return OrePoly(kind, list(self.eta))


def theta_apply(theta: PseudoLinearMap, v: Sequence[RatFunc]) -> list[RatFunc]:
    if len(v) != theta.n:
        raise ValueError(f"vector of length {len(v)} for a map of size {theta.n}")
    v = [as_ratfunc(e) for e in v]
    if theta.kind.is_shift:
        return theta.T.apply([e.shift(1) if e else e for e in v])
    Tv = theta.T.apply(v)
    return [theta.kind.act(e) + t if e else t for e, t in zip(v, Tv)]


def _iterates(theta: PseudoLinearMap, seed: KrylovSeed, m: int) -> list[list[RatFunc]]:
    cols = [seed.vector()]
    for _ in range(m):
        cols.append(theta_apply(theta, cols[-1]))
    return cols


def krylov_matrix(theta: PseudoLinearMap, seed: KrylovSeed, m: int) -> RatMatrix:
    if m < 0:
        raise ValueError("m must be non-negative")
    if len(seed.a) != theta.n:
        raise ValueError("seed length does not match the map")
    return RatMatrix.from_columns(_iterates(theta, seed, m))


class _Echelon:
    """Fraction-free incremental echelon form over Q[x]."""

    def __init__(self):
        self.rows: list[tuple[int, list[Poly]]] = []

    @staticmethod
    def _clear(v: Sequence[RatFunc]) -> list[Poly]:
        g = poly_lcm(e.den for e in v if e)
        return [(g * e).as_poly() if e else Poly() for e in v]

    def reduce(self, v: Sequence[RatFunc]) -> list[Poly]:
        w = self._clear(v)
        for piv, r in self.rows:
            if w[piv]:
                g = w[piv].gcd(r[piv])
                a, b = r[piv].exquo(g), w[piv].exquo(g)
                w = [a * x - b * y for x, y in zip(w, r)]
                c = Poly()
                for e in w:
                    if e:
                        c = c.gcd(e)
                if c and c.degree > 0:
                    w = [e.exquo(c) for e in w]
        return w

    def add(self, v: Sequence[RatFunc]) -> bool:
        """Append ``v``; return False if it depends on earlier vectors."""
        w = self.reduce(v)
        for i, e in enumerate(w):
            if e:
                self.rows.append((i, w))
                return True
        return False

    def depends(self, v: Sequence[RatFunc]) -> bool:
        return not any(self.reduce(v))


def _order_and_iterates(theta: PseudoLinearMap, seed: KrylovSeed) -> tuple[int, list[list[RatFunc]]]:
    if len(seed.a) != theta.n:
        raise ValueError("seed length does not match the map")
    if seed.is_zero():
        raise RelationError("zero seed")
    ech = _Echelon()
    cols = [seed.vector()]
    ech.add(cols[0])
    while True:
        v = theta_apply(theta, cols[-1])
        cols.append(v)
        if not ech.add(v):
            rho = len(cols) - 1
            break
    # theta-stability: the next iterate stays in the span
    nxt = theta_apply(theta, cols[-1])
    if not ech.depends(nxt):
        raise AssertionError("span of the iterates is not theta-stable")
    return rho, cols


def krylov_rank(theta: PseudoLinearMap, seed: KrylovSeed) -> int:
    """Dimension of the span of all iterates."""
    return _order_and_iterates(theta, seed)[0]


def _check_relation(cols: list[list[RatFunc]], eta: Sequence[Poly]):
    n = len(cols[0])
    for i in range(n):
        acc = RatFunc()
        for e, c in zip(eta, cols):
            if e and c[i]:
                acc = acc + c[i] * e
        if acc:
            raise AssertionError("computed relation does not annihilate the iterates")


def min_relation(theta: PseudoLinearMap, seed: KrylovSeed) -> Relation:
    rho, cols = _order_and_iterates(theta, seed)
    eta = min_kernel_vector(RatMatrix.from_columns(cols[: rho + 1]))
    _check_relation(cols, eta)
    return Relation(rho, eta)


def relation_at_order(theta: PseudoLinearMap, seed: KrylovSeed, m: int) -> Relation:
    rho, cols = _order_and_iterates(theta, seed)
    if m < rho:
        raise RelationError(f"order {m} is below the minimal order {rho}")
    while len(cols) < m + 1:
        cols.append(theta_apply(theta, cols[-1]))
    cols = cols[: m + 1]
    eta = min_kernel_vector(RatMatrix.from_columns(cols))
    _check_relation(cols, eta)
    return Relation(m, eta)


def krylov_mcmillan_check(theta: PseudoLinearMap, seed: KrylovSeed, m: int) -> tuple[int, int]:
    """``(degMM(K), rank(K)*d_a + m*degMM(T))`` for ``K`` with ``m+1`` columns."""
    K = krylov_matrix(theta, seed, m)
    rank = K.rank()
    actual = mcmillan_degree(K)
    bound = rank * seed.d_a + m * theta.degmm_T
    if actual > bound:
        raise AssertionError(f"Krylov McMillan degree {actual} exceeds {bound}")
    return actual, bound
