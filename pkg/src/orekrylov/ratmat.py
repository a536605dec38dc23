"""Polynomial and rational matrices and their structural invariants.

The McMillan degree is computed two ways: by splitting ``R`` into a
strictly proper part and a polynomial part (poles at infinity are read
off ``W(1/x)``), and by a Moebius change of variable that makes the whole
matrix proper.  Both read ``deg phi_rank`` off local Smith forms: for
each irreducible factor ``pi`` of the common denominator the cleared
matrix is reduced over ``Q[x]/pi^e``, which keeps entry sizes bounded
where a global Smith form over ``Q[x]`` would not.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import Mobius, Poly, RatFunc, as_ratfunc, mobius_substitute, poly_lcm

__all__ = [
    "PolyMatrix",
    "RatMatrix",
    "SmithMcMillanForm",
    "Realisation",
    "smith_normal_form",
    "smith_mcmillan",
    "determinantal_denominators",
    "pole_degree",
    "mcmillan_degree",
    "mcmillan_degree_via_mobius",
    "find_proper_mobius",
    "minor_degree",
    "realisation_degree_bound",
    "poly_det",
    "MobiusSearchError",
]


class MobiusSearchError(RuntimeError):
    """No properness-inducing transformation found within the retry budget."""


class _Matrix:
    """Shared dense storage; ``entries`` is a list of row lists."""

    __slots__ = ("entries",)
    _zero: Callable[[], object]
    _one: Callable[[], object]

    def __init__(self, entries: Iterable[Iterable]):
        rows = [list(map(self._convert, r)) for r in entries]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        self.entries = rows

    @staticmethod
    def _convert(v):
        return v

    @classmethod
    def _wrap(cls, rows):
        obj = cls.__new__(cls)
        obj.entries = rows
        return obj

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> list:
        return list(self.entries[i])

    def col(self, j: int) -> list:
        return [r[j] for r in self.entries]

    def columns(self) -> list[list]:
        return [self.col(j) for j in range(self.cols)]

    @classmethod
    def zeros(cls, m: int, n: int):
        return cls._wrap([[cls._zero() for _ in range(n)] for _ in range(m)])

    @classmethod
    def identity(cls, n: int):
        out = cls.zeros(n, n)
        for i in range(n):
            out.entries[i][i] = cls._one()
        return out

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]):
        if not cols:
            raise ValueError("need at least one column")
        m = len(cols[0])
        return cls([[cls._convert(c[i]) for c in cols] for i in range(m)])

    @classmethod
    def diag(cls, entries: Sequence):
        out = cls.zeros(len(entries), len(entries))
        for i, e in enumerate(entries):
            out.entries[i][i] = cls._convert(e)
        return out

    @classmethod
    def block_diag(cls, blocks: Sequence):
        n = sum(b.rows for b in blocks)
        p = sum(b.cols for b in blocks)
        out = cls.zeros(n, p)
        i0 = j0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out.entries[i0 + i][j0 + j] = b.entries[i][j]
            i0 += b.rows
            j0 += b.cols
        return out

    def transpose(self):
        return self._wrap([list(c) for c in zip(*self.entries)]) if self.entries else self._wrap([])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]):
        return self._wrap([[self.entries[i][j] for j in cols] for i in rows])

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return self._wrap([a + b for a, b in zip(self.entries, other.entries)])

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return self._wrap([list(r) for r in self.entries + other.entries])

    def map(self, f):
        return self._wrap([[f(e) for e in r] for r in self.entries])

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return self._wrap([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return self._wrap([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map(lambda e: -e)

    def scale(self, c):
        return self.map(lambda e: e * c)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        out = []
        for r in self.entries:
            row = []
            for c in cols:
                acc = self._zero()
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return self._wrap(out)

    def kron(self, other):
        out = self.zeros(self.rows * other.rows, self.cols * other.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                a = self.entries[i][j]
                if not a:
                    continue
                for k in range(other.rows):
                    for l in range(other.cols):
                        out.entries[i * other.rows + k][j * other.cols + l] = a * other.entries[k][l]
        return out

    def apply(self, v: Sequence):
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        out = []
        for r in self.entries:
            acc = self._zero()
            for a, b in zip(r, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def is_zero(self) -> bool:
        return not any(e for r in self.entries for e in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, _Matrix) or self.shape != other.shape:
            return NotImplemented
        return all(a == b for r, s in zip(self.entries, other.entries) for a, b in zip(r, s))

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.entries))

    def __str__(self) -> str:
        return "; ".join(", ".join(str(e) for e in r) for r in self.entries)

    def __repr__(self) -> str:
        return f"{type(self).__name__}[{self}]"


class PolyMatrix(_Matrix):
    _zero = staticmethod(Poly)
    _one = staticmethod(lambda: Poly([1]))

    @staticmethod
    def _convert(v):
        if isinstance(v, Poly):
            return v
        if isinstance(v, RatFunc):
            return v.as_poly()
        return Poly.const(v)

    @property
    def degree(self):
        return max((e.degree for r in self.entries for e in r), default=float("-inf"))

    def to_ratmatrix(self) -> "RatMatrix":
        return RatMatrix._wrap([[RatFunc._coerce(e) for e in r] for r in self.entries])

    def det(self) -> Poly:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return poly_det(self.entries)

    def rank(self) -> int:
        return _poly_rank([list(r) for r in self.entries])

    def evaluate(self, v) -> list[list[Fraction]]:
        return [[e(v) for e in r] for r in self.entries]


class RatMatrix(_Matrix):
    _zero = staticmethod(RatFunc)
    _one = staticmethod(lambda: RatFunc(1))

    @staticmethod
    def _convert(v):
        return as_ratfunc(v)

    # -- structure --------------------------------------------------------
    def common_denominator(self) -> Poly:
        """phi_1: monic lcm of all entry denominators."""
        return poly_lcm(e.den for r in self.entries for e in r if e)

    def clear_denominators(self) -> tuple[PolyMatrix, Poly]:
        """Return ``(N, phi1)`` with ``self = N / phi1``."""
        g = self.common_denominator()
        return PolyMatrix._wrap([[(g * e).as_poly() for e in r] for r in self.entries]), g

    def is_polynomial(self) -> bool:
        return all(e.is_polynomial() for r in self.entries for e in r)

    def to_polymatrix(self) -> PolyMatrix:
        return PolyMatrix._wrap([[e.as_poly() for e in r] for r in self.entries])

    def is_proper(self) -> bool:
        return all(e.is_proper() for r in self.entries for e in r)

    def split_polynomial_part(self) -> tuple["RatMatrix", PolyMatrix]:
        """``R = R_o + W`` with ``R_o`` strictly proper and ``W`` polynomial."""
        ro, w = [], []
        for r in self.entries:
            pr, sr = [], []
            for e in r:
                q, s = e.poly_part()
                sr.append(s)
                pr.append(q)
            ro.append(sr)
            w.append(pr)
        return RatMatrix._wrap(ro), PolyMatrix._wrap(w)

    def substitute(self, mu: Mobius) -> "RatMatrix":
        return self.map(lambda e: mobius_substitute(e, mu) if not e.is_zero() else e)

    def shift(self, steps: int = 1) -> "RatMatrix":
        return self.map(lambda e: e.shift(steps))

    def evaluate(self, v) -> list[list[Fraction]]:
        return [[e(v) for e in r] for r in self.entries]

    # -- linear algebra over Q(x) ----------------------------------------
    def rref(self) -> tuple["RatMatrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        rows = [list(r) for r in self.entries]
        pivots: list[int] = []
        m, n = self.rows, self.cols
        r = 0
        for c in range(n):
            if r == m:
                break
            best = None
            for i in range(r, m):
                e = rows[i][c]
                if e and (best is None or e.height < rows[best][c].height):
                    best = i
            if best is None:
                continue
            rows[r], rows[best] = rows[best], rows[r]
            inv = rows[r][c].inverse()
            rows[r] = [e * inv if e else e for e in rows[r]]
            for i in range(m):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
        return RatMatrix._wrap(rows), pivots

    def rank(self) -> int:
        n, _ = self.clear_rows()
        return _poly_rank(n)

    def clear_rows(self) -> tuple[list[list[Poly]], list[Poly]]:
        """Scale each row by its own common denominator."""
        out, dens = [], []
        for r in self.entries:
            g = poly_lcm(e.den for e in r if e)
            out.append([(g * e).as_poly() if e else Poly() for e in r])
            dens.append(g)
        return out, dens

    def inverse(self) -> "RatMatrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        aug = self.hstack(RatMatrix.identity(n))
        e, piv = aug.rref()
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return e.submatrix(range(n), range(n, 2 * n))

    def det(self) -> RatFunc:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n, g = self.clear_denominators()
        return RatFunc(poly_det(n.entries)) / (g ** self.rows)


def _poly_rank(rows: list[list[Poly]]) -> int:
    """Rank over Q(x) by fraction-free elimination with content removal."""
    rows = [r for r in rows if any(rows and r)]
    rank = 0
    if not rows:
        return 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][c] and (piv is None or rows[i][c].degree < rows[piv][c].degree):
                piv = i
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        for i in range(rank + 1, len(rows)):
            a = rows[i][c]
            if a:
                g = a.gcd(p[c])
                fa, fp = p[c].exquo(g), a.exquo(g)
                rows[i] = _primitive([fa * x - fp * y for x, y in zip(rows[i], p)])
        rank += 1
        if rank == len(rows):
            break
    return rank


def _primitive(v: list[Poly]) -> list[Poly]:
    g = Poly()
    for e in v:
        if e:
            g = g.gcd(e)
            if g.degree == 0:
                break
    if g.is_zero() or g.degree == 0:
        return v
    return [e.exquo(g) for e in v]


def poly_det(entries: Sequence[Sequence[Poly]]) -> Poly:
    """Bareiss fraction-free determinant over Q[x]."""
    a = [list(r) for r in entries]
    n = len(a)
    if n == 0:
        return Poly([1])
    sign = 1
    prev = Poly([1])
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Poly()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exquo(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


# -- Smith and Smith-McMillan forms ------------------------------------------

def smith_normal_form(A: PolyMatrix, transforms: bool = True):
    """Smith form by gcd-pivoting elimination.

    Returns ``(U, S, V)`` with ``U*A*V == S``, ``U`` and ``V`` unimodular and
    ``S`` diagonal with monic invariant factors ``g_1 | g_2 | ...``.  With
    ``transforms=False`` the unimodular factors are returned as ``None``.
    """
    m, n = A.shape
    S = [list(r) for r in A.entries]
    U = [list(r) for r in PolyMatrix.identity(m).entries] if transforms else None
    V = [list(r) for r in PolyMatrix.identity(n).entries] if transforms else None

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        S[dst] = [a - q * b if b else a for a, b in zip(S[dst], S[src])]
        if U is not None:
            U[dst] = [a - q * b if b else a for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for r in S:
            if r[src]:
                r[dst] = r[dst] - q * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] = r[dst] - q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                e = S[i][j]
                if e and (best is None or e.degree < S[best[0]][best[1]].degree):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    q, r = divmod(S[i][t], S[t][t])
                    add_row(i, t, q)
                    if r:
                        clean = False
            for j in range(t + 1, n):
                if S[t][j]:
                    q, r = divmod(S[t][j], S[t][t])
                    add_col(j, t, q)
                    if r:
                        clean = False
            if not clean:
                # a remainder of smaller degree appeared: move it to the pivot
                cand = [(i, t) for i in range(t + 1, m) if S[i][t]]
                cand += [(t, j) for j in range(t + 1, n) if S[t][j]]
                i, j = min(cand, key=lambda ij: S[ij[0]][ij[1]].degree)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] and S[i][j] % S[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, Poly([-1]))
        lc = S[t][t].lc
        if lc != 1:
            inv = Fraction(1) / lc
            S[t] = [e * inv for e in S[t]]
            if U is not None:
                U[t] = [e * inv for e in U[t]]
        t += 1
    wrap = PolyMatrix._wrap
    return (wrap(U) if U is not None else None, wrap(S), wrap(V) if V is not None else None)


def invariant_factors(A: PolyMatrix) -> list[Poly]:
    _, S, _ = smith_normal_form(A, transforms=False)
    out = []
    for i in range(min(A.shape)):
        if S[i, i]:
            out.append(S[i, i])
    return out


@dataclass(frozen=True)
class SmithMcMillanForm:
    rank: int
    eps: tuple[Poly, ...]
    psi: tuple[Poly, ...]

    def matrix(self, rows: int, cols: int) -> RatMatrix:
        out = RatMatrix.zeros(rows, cols)
        for i in range(self.rank):
            out.entries[i][i] = RatFunc(self.eps[i], self.psi[i])
        return out

    @property
    def denominator_degree(self) -> int:
        return sum(p.degree for p in self.psi)


def smith_mcmillan(R: RatMatrix) -> SmithMcMillanForm:
    N, phi1 = R.clear_denominators()
    gammas = invariant_factors(N)
    eps, psi = [], []
    for g in gammas:
        h = g.gcd(phi1)
        eps.append(g.exquo(h).monic())
        psi.append(phi1.exquo(h).monic())
    return SmithMcMillanForm(len(gammas), tuple(eps), tuple(psi))


def determinantal_denominators(R: RatMatrix) -> list[Poly]:
    """``[phi_0, ..., phi_rank]``; beyond the rank the sequence is constant."""
    sm = smith_mcmillan(R)
    out = [Poly([1])]
    for p in sm.psi:
        out.append(out[-1] * p)
    return out


def _at_infinity(W: PolyMatrix) -> RatMatrix:
    """The matrix ``W(1/x)``."""
    def flip(p: Poly) -> RatFunc:
        if p.is_zero():
            return RatFunc()
        return RatFunc(Poly(list(reversed(p.coeffs()))), Poly.monomial(int(p.degree)))

    return RatMatrix._wrap([[flip(e) for e in r] for r in W.entries])


def _local_valuations(rows: list[list], pi, cap: int) -> list[int]:
    """Valuations at ``pi`` of the invariant factors of a polynomial
    matrix (entries ``fmpq_poly``), keeping only those below ``cap``."""
    m = pi ** cap
    A = [[e % m for e in r] for r in rows]

    def val(p) -> int:
        v = 0
        while v < cap:
            q, r = divmod(p, pi)
            if r != 0:
                break
            p, v = q, v + 1
        return v

    out = []
    while A and A[0]:
        best = None
        for i, r in enumerate(A):
            for j, e in enumerate(r):
                if e != 0:
                    v = val(e)
                    if best is None or v < best[0]:
                        best = (v, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None or best[0] >= cap:
            break
        v, i, j = best
        A[0], A[i] = A[i], A[0]
        for r in A:
            r[0], r[j] = r[j], r[0]
        pv = pi ** v
        g, uinv, _ = (A[0][0] // pv).xgcd(m)
        uinv = uinv * (1 / g[0])
        head = A[0]
        rest = []
        for r in A[1:]:
            if r[0] != 0:
                c = ((r[0] // pv) * uinv) % m
                r = [(a - c * b) % m for a, b in zip(r, head)]
            rest.append(r[1:])
        # the pivot divides the rest of its row, so column operations
        # would not touch the remaining block
        out.append(v)
        A = rest
    return out


def pole_degree(R: RatMatrix) -> int:
    """``deg phi_rank(R)``: total order of the finite poles of ``R``."""
    if R.is_zero():
        return 0
    N, phi1 = R.clear_denominators()
    if phi1.degree <= 0:
        return 0
    rows = [[e._p for e in r] for r in N.entries]
    _, facs = phi1._p.factor()
    total = 0
    for pi, e in facs:
        vals = _local_valuations(rows, pi, e)
        total += pi.degree() * sum(e - v for v in vals)
    return total


def mcmillan_degree(R: RatMatrix) -> int:
    Ro, W = R.split_polynomial_part()
    finite = pole_degree(Ro)
    infinite = pole_degree(_at_infinity(W)) if not W.is_zero() else 0
    return finite + infinite


def _mobius_keeps_proper(R: RatMatrix, mu: Mobius) -> bool:
    # R(mu) has a pole at infinity iff R has a pole at mu(infinity)
    pt = mu.image_of_infinity
    return all(e.den(pt) != 0 for r in R.entries for e in r if e)


def find_proper_mobius(family: Sequence[RatMatrix], rng: random.Random | None = None,
                       budget: int = 200) -> Mobius:
    if not family:
        raise ValueError("empty family")
    rng = rng or random.Random(0)
    for _ in range(budget):
        a, b, c, d = (rng.randint(-20, 20) for _ in range(4))
        if c == 0 or a * d - b * c == 0:
            continue
        mu = Mobius(a, b, c, d)
        if all(_mobius_keeps_proper(R, mu) for R in family):
            if all(R.substitute(mu).is_proper() for R in family):
                return mu
    raise MobiusSearchError(f"no proper Moebius transformation in {budget} tries")


def mcmillan_degree_via_mobius(R: RatMatrix, rng: random.Random | None = None,
                               mu: Mobius | None = None) -> int:
    if mu is None:
        mu = find_proper_mobius([R], rng)
    Rmu = R.substitute(mu)
    if not Rmu.is_proper():
        raise MobiusSearchError(f"{mu} does not make the matrix proper")
    return pole_degree(Rmu)


def minor_degree(A: PolyMatrix) -> int:
    """Largest degree of a minor whose size equals the rank.

    With ``w`` the largest entry degree, the rank-size minors of
    ``x^w A(1/x)`` are the reversed minors of ``A``; their gcd is the
    product of the invariant factors, whose order at zero gives the answer.
    """
    if A.is_zero():
        raise ValueError("minor degree of the zero matrix")
    w = int(A.degree)

    def rev(p: Poly) -> Poly:
        if p.is_zero():
            return p
        cs = p.coeffs()
        return Poly([0] * (w - len(cs) + 1) + list(reversed(cs)))

    Ahat = A.map(rev)
    # rank-size minors have degree <= rank*w, so no valuation reaches cap
    cap = min(A.shape) * w + 1
    vals = _local_valuations([[e._p for e in r] for r in Ahat.entries], Poly.x()._p, cap)
    return len(vals) * w - sum(vals)


@dataclass(frozen=True)
class Realisation:
    """``R = X * M^{-1} * Y`` with polynomial ``X``, ``M``, ``Y``."""

    X: PolyMatrix
    M: PolyMatrix
    Y: PolyMatrix

    def __post_init__(self):
        h = self.M.rows
        if self.M.cols != h or self.X.cols != h or self.Y.rows != h:
            raise ValueError("inconsistent realisation shapes")

    def product(self) -> RatMatrix:
        Minv = self.M.to_ratmatrix().inverse()
        return self.X.to_ratmatrix() @ Minv @ self.Y.to_ratmatrix()


def realisation_degree_bound(r: Realisation) -> int:
    det = r.M.det()
    if det.is_zero():
        raise ZeroDivisionError("realisation with singular middle matrix")
    return int(det.degree)
