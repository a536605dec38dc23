"""Applications reduced to a minimal relation for a pseudo-linear map.

Each builder constructs ``T`` and a seed vector, asks the Krylov solver
for the relation of least degree, and returns the operator together with
its closed-form degree bound.
"""

from __future__ import annotations

import itertools
import math
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Poly, RatFunc
from .bivariate import BivarPoly
from .bounds import BoundQuery, degmm_bound, evaluate_bound
from .closure import ClosurePoly
from .ore import DX, OreKind, OrePoly, ore_mul
from .pseudokrylov import KrylovSeed, PseudoLinearMap, krylov_rank, min_relation, relation_at_order
from .ratmat import PolyMatrix, RatMatrix, Realisation

__all__ = [
    "InstanceReport",
    "InstanceError",
    "companion_matrix",
    "lclm",
    "symmetric_product",
    "polynomial_closure",
    "sym_power",
    "associate",
    "wronskian_annihilator",
    "differential_resolvent",
    "resolvent_realisation",
    "compose_annihilator",
    "HermiteReduction",
    "hermite_reduce",
    "telescoper",
    "telescoper_realisation",
    "instance_degmm_report",
]


class InstanceError(ValueError):
    """Input violates an instance precondition."""


@dataclass
class InstanceReport:
    family: str
    operator: OrePoly
    order: int
    degree: int
    bound: int
    degmm_T: int | None
    elapsed: float
    theta: PseudoLinearMap | None = None
    seed: KrylovSeed | None = None
    params: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    degmm_bound: Fraction | None = None
    notes: list[str] = field(default_factory=list)
    parts: list["InstanceReport"] = field(default_factory=list)

    @property
    def rho(self) -> int:
        return self.params.get("rho", self.order)

    @property
    def tightness(self) -> float | None:
        return self.degree / self.bound if self.bound else None


# -- shared plumbing ----------------------------------------------------------

def _solve(family: str, theta: PseudoLinearMap, seed: KrylovSeed, params: dict,
           order: int | None, t0: float, inputs: dict) -> InstanceReport:
    if order is None:
        rel = min_relation(theta, seed)
        rho = rel.order
    else:
        rho = krylov_rank(theta, seed)
        rel = relation_at_order(theta, seed, order)
    op = rel.operator(theta.kind).normalized()
    params = dict(params, rho=rho)
    bound = evaluate_bound(BoundQuery(family, params, rel.order))
    mm_bound = degmm_bound(family, params) if family != "Generic" else None
    elapsed = time.perf_counter() - t0
    return InstanceReport(family, op, rel.order, op.degree, bound, theta.degmm_T, elapsed,
                          theta, seed, params, inputs, mm_bound)


def _check_kinds(Ls: Sequence[OrePoly]) -> OreKind:
    if not Ls:
        raise InstanceError("need at least one operator")
    kind = Ls[0].kind
    for L in Ls:
        if L.kind != kind:
            raise InstanceError(f"operators of different kinds: {kind.symbol} and {L.kind.symbol}")
        if L.order < 1:
            raise InstanceError(f"operator {L} has order < 1")
    if kind.is_diff and kind.p.degree > 1:
        raise InstanceError("differential kind needs deg p <= 1")
    return kind


def companion_matrix(L: OrePoly) -> RatMatrix:
    """Action of the generator on ``(alpha, D alpha, ..., D^(r-1) alpha)``."""
    r = L.order
    inv = L.lc.inverse()
    C = [[RatFunc() for _ in range(r)] for _ in range(r)]
    for j in range(r - 1):
        C[j + 1][j] = RatFunc(1)
    for j in range(r):
        C[j][r - 1] = -L[j] * inv
    return RatMatrix(C)


def _unit(n: int, k: int = 0) -> KrylovSeed:
    return KrylovSeed(tuple(Poly([int(i == k)]) for i in range(n)))


# -- LCLM and symmetric products ---------------------------------------------

def lclm(Ls: Sequence[OrePoly], order: int | None = None) -> InstanceReport:
    """Least common left multiple: annihilator of every sum of solutions."""
    t0 = time.perf_counter()
    kind = _check_kinds(Ls)
    Ls = [L.normalized() for L in Ls]
    T = RatMatrix.block_diag([companion_matrix(L) for L in Ls])
    seed = KrylovSeed(tuple(Poly([int(j == 0)]) for L in Ls for j in range(L.order)))
    params = {"s": len(Ls), "d": max(L.degree for L in Ls), "d_i": [L.degree for L in Ls],
              "r_i": [L.order for L in Ls]}
    return _solve("LCLM", PseudoLinearMap(kind, T), seed, params, order, t0, {"Ls": Ls})


def symmetric_product(Ls: Sequence[OrePoly], order: int | None = None) -> InstanceReport:
    """Annihilator of every product ``alpha_1 * ... * alpha_s``."""
    t0 = time.perf_counter()
    kind = _check_kinds(Ls)
    Ls = [L.normalized() for L in Ls]
    T = companion_matrix(Ls[0])
    for L in Ls[1:]:
        C = companion_matrix(L)
        if kind.is_shift:
            T = T.kron(C)
        else:
            T = T.kron(RatMatrix.identity(C.rows)) + RatMatrix.identity(T.rows).kron(C)
    params = {"r_i": [L.order for L in Ls], "d_i": [L.degree for L in Ls]}
    return _solve("SymProd", PseudoLinearMap(kind, T), _unit(T.rows), params, order, t0, {"Ls": Ls})


# -- polynomial closures ------------------------------------------------------

State = tuple[tuple[int, ...], ...]


def _closure_basis(ks: Sequence[int], rs: Sequence[int]) -> list[State]:
    per_group = [list(itertools.combinations_with_replacement(range(r), k)) for k, r in zip(ks, rs)]
    return list(itertools.product(*per_group))


def _linear_forms(Ls: Sequence[OrePoly]) -> list[dict[int, RatFunc]]:
    out = []
    for L in Ls:
        inv = L.lc.inverse()
        out.append({j: -L[j] * inv for j in range(L.order) if L[j]})
    return out


def _add(acc: dict, key, c: RatFunc):
    v = acc.get(key)
    acc[key] = c if v is None else v + c


def _closure_T(kind: OreKind, Ls: Sequence[OrePoly], basis: list[State]) -> RatMatrix:
    rs = [L.order for L in Ls]
    lin = _linear_forms(Ls)
    index = {b: n for n, b in enumerate(basis)}
    cols = []
    for b in basis:
        img: dict[State, RatFunc] = {}
        if kind.is_shift:
            # every factor moves one step at once
            partial: dict[State, RatFunc] = {tuple(() for _ in b): RatFunc(1)}
            for i, g in enumerate(b):
                for h in g:
                    form = {h + 1: RatFunc(1)} if h + 1 < rs[i] else lin[i]
                    nxt: dict[State, RatFunc] = {}
                    for st, c in partial.items():
                        for j, cj in form.items():
                            grp = tuple(sorted(st[i] + (j,)))
                            _add(nxt, st[:i] + (grp,) + st[i + 1:], c * cj)
                    partial = nxt
            img = partial
        else:
            # Leibniz rule, one factor at a time
            for i, g in enumerate(b):
                for pos, h in enumerate(g):
                    rest = g[:pos] + g[pos + 1:]
                    form = {h + 1: RatFunc(1)} if h + 1 < rs[i] else lin[i]
                    for j, cj in form.items():
                        grp = tuple(sorted(rest + (j,)))
                        _add(img, b[:i] + (grp,) + b[i + 1:], cj)
        col = [RatFunc()] * len(basis)
        for st, c in img.items():
            col[index[st]] = col[index[st]] + c
        cols.append(col)
    return RatMatrix.from_columns(cols)


def _closure_seed(J: ClosurePoly, basis: list[State], s: int) -> list[Poly]:
    index = {b: n for n, b in enumerate(basis)}
    vec = [Poly() for _ in basis]
    for mono, c in J.terms.items():
        groups: list[list[int]] = [[] for _ in range(s)]
        for (i, j), e in mono:
            groups[i - 1].extend([j] * e)
        st = tuple(tuple(sorted(g)) for g in groups)
        vec[index[st]] = vec[index[st]] + c.as_poly()
    return vec


def _homogeneous_closure(J: ClosurePoly, Ls: list[OrePoly], kind: OreKind,
                         order: int | None, t0: float) -> InstanceReport:
    s = len(Ls)
    ks = J.degree_vectors(s)[0]
    rs = [L.order for L in Ls]
    g = J.common_denominator()
    Jp = J * g if g.degree > 0 else J
    basis = _closure_basis(ks, rs)
    T = _closure_T(kind, Ls, basis)
    seed = KrylovSeed(tuple(_closure_seed(Jp, basis, s)))
    params = {"deg_x_J": Jp.deg_x, "k_i": list(ks), "r_i": rs, "d_i": [L.degree for L in Ls],
              "R": len(basis)}
    if kind.is_shift:
        params["shift"] = 1
    rep = _solve("Polynomials", PseudoLinearMap(kind, T), seed, params, order, t0,
                 {"J": J, "Ls": Ls})
    if g.degree > 0:
        # the relation annihilates g*J; compose with g on the right
        op = ore_mul(rep.operator, OrePoly(kind, [g])).normalized()
        rep.operator = op
        rep.degree = op.degree
        rep.bound += int(g.degree)
        rep.params["deg_den_J"] = int(g.degree)
        rep.notes.append(f"J has denominator {g}; bound includes its degree")
    return rep


def polynomial_closure(J: ClosurePoly, Ls: Sequence[OrePoly], order: int | None = None) -> InstanceReport:
    """Annihilator of ``J(x, alpha_1, alpha_1', ..., alpha_s^(r_s - 1))``
    for all solutions ``alpha_i`` of ``L_i``.

    Derivatives of order ``>= r_i`` in ``J`` are rewritten through ``L_i``.
    A non-homogeneous ``J`` is split into parts of fixed group degrees
    whose annihilators are combined by an LCLM.
    """
    t0 = time.perf_counter()
    kind = _check_kinds(Ls)
    Ls = [L.normalized() for L in Ls]
    if J.groups > len(Ls):
        raise InstanceError(f"J uses group {J.groups} but only {len(Ls)} operators were given")
    Jr = J.reduce(Ls)
    if Jr.is_zero():
        raise InstanceError("J is zero")
    parts = Jr.homogeneous_parts(len(Ls))
    if len(parts) == 1:
        rep = _homogeneous_closure(Jr, Ls, kind, order, t0)
        rep.inputs["J"] = J
        return rep
    if order is not None:
        raise InstanceError("--order is only supported for homogeneous J")
    reps = [_homogeneous_closure(P, Ls, kind, None, time.perf_counter()) for P in parts.values()]
    comb = lclm([r.operator for r in reps])
    dmax = max(r.degree for r in reps)
    params = {"s": len(reps), "d": dmax, "rho": comb.order}
    bound = evaluate_bound(BoundQuery("LCLM", params))
    rep = InstanceReport("Polynomials", comb.operator, comb.order, comb.degree, bound, None,
                         time.perf_counter() - t0, None, None, params, {"J": J, "Ls": Ls},
                         None, [f"non-homogeneous J split into {len(reps)} parts"], reps)
    return rep


def _wrapper(rep: InstanceReport, family: str, params: dict, order: int | None) -> InstanceReport:
    if order is None:
        rep.bound = evaluate_bound(BoundQuery(family, params))
        rep.params.update(params)
        rep.family = family
    return rep


def sym_power(L: OrePoly, ell: int, order: int | None = None) -> InstanceReport:
    """Annihilator of ``alpha^ell`` for every solution of ``L``."""
    if ell < 1:
        raise InstanceError("ell must be positive")
    Ln = L.normalized()
    rep = polynomial_closure(ClosurePoly.var(1, 0) ** ell, [Ln], order)
    return _wrapper(rep, "SymPower", {"r": Ln.order, "d": Ln.degree, "ell": ell}, order)


def associate(L: OrePoly, A: OrePoly, order: int | None = None) -> InstanceReport:
    """Annihilator of ``A(alpha)`` for every solution of ``L``."""
    if A.kind != L.kind:
        raise InstanceError("A and L must be of the same kind")
    if A.is_zero() or A.order >= L.order:
        raise InstanceError("associate needs 0 <= order(A) < order(L)")
    if not all(c.is_polynomial() for c in A.coeffs):
        raise InstanceError("A must have polynomial coefficients")
    J = ClosurePoly([((((1, j), 1),), c) for j, c in enumerate(A.coeffs) if c])
    Ln = L.normalized()
    rep = polynomial_closure(J, [Ln], order)
    rep.inputs["A"] = A
    return _wrapper(rep, "Associate", {"r": Ln.order, "d": Ln.degree, "d_A": A.degree}, order)


def wronskian_polynomial(s: int) -> ClosurePoly:
    """``det(y_{j, i})`` for ``0 <= i < s`` and groups ``1 <= j <= s``."""
    out = ClosurePoly()
    for perm in itertools.permutations(range(s)):
        inv = sum(1 for a in range(s) for b in range(a + 1, s) if perm[a] > perm[b])
        t = ClosurePoly.const(-1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            t = t * ClosurePoly.var(j + 1, i)
        out = out + t
    return out


def wronskian_annihilator(Ls: Sequence[OrePoly], order: int | None = None) -> InstanceReport:
    """Annihilator of the Wronskian of solutions of ``L_1, ..., L_s``.

    All operators must share one order ``r``.  With ``s = r`` the
    corollary bound ``r^(2r) d`` is reported, otherwise the closure bound.
    """
    t0 = time.perf_counter()
    kind = _check_kinds(Ls)
    rs = {L.order for L in Ls}
    if len(rs) != 1:
        raise InstanceError("wronskian needs operators of a common order")
    r = rs.pop()
    Ls = [L.normalized() for L in Ls]
    J = wronskian_polynomial(len(Ls))
    if J.reduce(Ls).is_zero():
        one = OrePoly(kind, [1])
        return InstanceReport("Polynomials", one, 0, 0, 0, None, time.perf_counter() - t0,
                              params={"rho": 0}, inputs={"J": J, "Ls": Ls},
                              notes=["the Wronskian vanishes identically"])
    rep = polynomial_closure(J, Ls, order)
    if len(Ls) == r:
        rep = _wrapper(rep, "Wronskian", {"r": r, "d": max(L.degree for L in Ls)}, order)
    return rep


# -- algebraic functions ------------------------------------------------------

def _prepare_algebraic(P: BivarPoly, name: str) -> BivarPoly:
    if not P.is_polynomial():
        raise InstanceError(f"{name} must be polynomial in x and y")
    if P.deg_y < 1:
        raise InstanceError(f"{name} must depend on y")
    return P.primitive()


def _inverse_mod(a: BivarPoly, P: BivarPoly, what: str) -> BivarPoly:
    g, s, _ = a.xgcd(P)
    if g.deg_y != 0:
        raise InstanceError(f"{what} is not invertible modulo P")
    return s % P


def _vector(a: BivarPoly, n: int) -> list[RatFunc]:
    return [a[i] for i in range(n)]


def differential_resolvent(P: BivarPoly, order: int | None = None) -> InstanceReport:
    """Minimal operator annihilating every root of ``P(x, y) = 0``."""
    t0 = time.perf_counter()
    P = _prepare_algebraic(P, "P")
    notes = []
    if not P.is_squarefree():
        P = P.squarefree_part().primitive()
        warnings.warn("P is not square-free in y; using its square-free part", stacklevel=2)
        notes.append(f"replaced P by its square-free part {P}")
    r, d = P.deg_y, P.deg_x
    Px, Py = P.diff_x(), P.diff_y()
    w = (-Px * _inverse_mod(Py, P, "P_y")) % P
    cols = []
    for j in range(r):
        a_y = BivarPoly([0] * (j - 1) + [j]) if j else BivarPoly()
        cols.append(_vector((a_y * w) % P, r))
    theta = PseudoLinearMap(DX, RatMatrix.from_columns(cols))
    params = {"r": r, "d": d}
    inputs = {"P": P}
    root = BivarPoly.y() % P
    if r == 1 and not root[0].is_polynomial():
        # the single root is a rational function; y mod P is not a polynomial vector
        return _rational_root_resolvent(root[0], theta, params, order, t0, inputs, notes)
    seed = KrylovSeed(tuple(c.as_poly() for c in _vector(root, r)))
    if seed.is_zero():
        one = OrePoly(DX, [1])
        return InstanceReport("AlgeqToDiffeq", one, 0, 0, 0, theta.degmm_T, time.perf_counter() - t0,
                              theta, None, dict(params, rho=0), inputs, degmm_bound("AlgeqToDiffeq", params),
                              notes + ["the only root is 0"])
    rep = _solve("AlgeqToDiffeq", theta, seed, params, order, t0, inputs)
    rep.notes.extend(notes)
    return rep


def _rational_root_resolvent(alpha: RatFunc, theta, params, order, t0, inputs, notes) -> InstanceReport:
    num, den = alpha.num, alpha.den
    if order not in (None, 1):
        raise InstanceError("only order 1 is available for a rational root")
    op = OrePoly(DX, [-(num.derivative() * den - num * den.derivative()), num * den]).normalized()
    # the closed form for a polynomial seed does not cover this case; deg(num*den) does
    bound = max(evaluate_bound(BoundQuery("AlgeqToDiffeq", dict(params, rho=1))),
                int(num.degree + den.degree))
    notes = notes + ["single rational root: bound is deg(num) + deg(den)"]
    return InstanceReport("AlgeqToDiffeq", op, 1, op.degree, bound, theta.degmm_T,
                          time.perf_counter() - t0, theta, None, dict(params, rho=1), inputs,
                          degmm_bound("AlgeqToDiffeq", params), notes)


def _coeff_matrix(polys: Sequence[BivarPoly], rows: int) -> PolyMatrix:
    return PolyMatrix([[p[i].as_poly() for p in polys] for i in range(rows)])


def resolvent_realisation(P: BivarPoly) -> Realisation:
    """``T = X M^{-1} Y`` with ``M`` the Sylvester map ``(U, V) -> U P + V P_y``."""
    P = _prepare_algebraic(P, "P")
    r = P.deg_y
    Px, Py = P.diff_x(), P.diff_y()
    y = BivarPoly.y()
    cols = [y ** i * P for i in range(r - 1)] + [y ** i * Py for i in range(r)]
    M = _coeff_matrix(cols, 2 * r - 1)
    Ycols = []
    for j in range(r):
        a_y = BivarPoly([0] * (j - 1) + [j]) if j else BivarPoly()
        Ycols.append(-a_y * Px)
    Y = _coeff_matrix(Ycols, 2 * r - 1)
    X = PolyMatrix([[Poly([int(c == r - 1 + i)]) for c in range(2 * r - 1)] for i in range(r)])
    return Realisation(X, M, Y)


def compose_annihilator(P: BivarPoly, L: OrePoly, order: int | None = None) -> InstanceReport:
    """Annihilator of ``f(g(x))`` for every root ``g`` of ``P`` and every
    solution ``f`` of ``L``."""
    t0 = time.perf_counter()
    if L.kind != DX:
        raise InstanceError("composition needs an operator in Dx")
    if L.order < 1:
        raise InstanceError("L must have order >= 1")
    P = _prepare_algebraic(P, "P")
    if not P.is_squarefree():
        raise InstanceError("P must be square-free in y")
    L = L.normalized()
    rP, rL = P.deg_y, L.order
    ls = [BivarPoly(c.as_poly().coeffs()) for c in L.coeffs]
    if P.gcd(ls[-1]).deg_y > 0:
        raise InstanceError("P and the leading coefficient of L (in y) have a common factor")
    Px, Py = P.diff_x(), P.diff_y()
    w = (-Px * _inverse_mod(Py, P, "P_y")) % P
    inv_l = _inverse_mod(ls[-1] % P, P, "l(y)")
    top = [(-l * inv_l) % P for l in ls[:-1]]  # y^0 d^rL in the basis
    n = rP * rL
    cols = []
    for j in range(rL):
        for i in range(rP):
            # a = y^i d^j; T a = w*(d_y a + a*d) mod <L, P>
            img = [BivarPoly() for _ in range(rL)]
            if i:
                img[j] = img[j] + BivarPoly([0] * (i - 1) + [i])
            yi = BivarPoly([0] * i + [1])
            if j + 1 < rL:
                img[j + 1] = img[j + 1] + yi
            else:
                for k in range(rL):
                    img[k] = img[k] + yi * top[k]
            col = []
            for k in range(rL):
                col.extend(_vector((img[k] * w) % P, rP))
            cols.append(col)
    theta = PseudoLinearMap(DX, RatMatrix.from_columns(cols))
    params = {"d_P": P.deg_x, "r_P": rP, "d_L": L.degree, "r_L": rL}
    e_lc = int(P[rP].as_poly().degree)
    if e_lc:
        params["e_lc"] = e_lc
    rep = _solve("Composition", theta, _unit(n), params, order, t0, {"P": P, "L": L})
    if e_lc:
        rep.notes.append(f"P is not monic in y; bound includes {rL}*deg(lc_y P) = {rL * e_lc}")
    return rep


# -- Hermite reduction and telescopers ----------------------------------------

@dataclass(frozen=True)
class HermiteReduction:
    """``num/q^k = d/dy(cert_num/q^cert_pow) + r/q``."""

    r: BivarPoly
    cert_num: BivarPoly
    cert_pow: int
    q: BivarPoly

    def certificate(self) -> tuple[BivarPoly, BivarPoly]:
        return self.cert_num, self.q ** self.cert_pow


def _bezout(q: BivarPoly) -> tuple[BivarPoly, BivarPoly]:
    g, s, t = q.xgcd(q.diff_y())
    if g.deg_y != 0:
        raise InstanceError("q is not square-free in y")
    return s, t


def hermite_reduce(num: BivarPoly, q: BivarPoly, k: int, _bez=None) -> HermiteReduction:
    """Hermite reduction of ``num/q^k`` with respect to ``y``."""
    if k < 1:
        raise InstanceError("k must be >= 1")
    if q.deg_y < 1:
        raise InstanceError("q must depend on y")
    if num.deg_y >= k * q.deg_y:
        raise InstanceError("num/q^k must be proper in y")
    s, t = _bez or _bezout(q)
    qy = q.diff_y()
    K = k - 1
    A = num
    N = BivarPoly()
    for j in range(k, 1, -1):
        # A/q^j = d/dy(-t'/((j-1) q^(j-1))) + (A s + Q q_y + t'_y/(j-1))/q^(j-1)
        Q, tp = divmod(A * t, q)
        N = N - tp * q ** (K - j + 1) / (j - 1)
        A = A * s + Q * qy + tp.diff_y() / (j - 1)
        if A.deg_y >= (j - 1) * q.deg_y:
            raise AssertionError("Hermite step lost properness")
    red = HermiteReduction(A, N, K, q)
    if N.diff_y() * q - N * qy * K + A * q ** K != num:
        raise AssertionError("Hermite reduction does not reproduce the input")
    return red


def _apply_operator_y(L: OrePoly, p: BivarPoly, q: BivarPoly) -> tuple[BivarPoly, int]:
    """``L(p/q) = N/q^k`` for ``L`` in ``d/dx``."""
    qx = q.diff_x()
    N, k = BivarPoly(), len(L.coeffs)
    cur, j = p, 1
    for c in L.coeffs:
        if c:
            N = N + cur * q ** (k - j) * c
        cur, j = cur.diff_x() * q - cur * qx * j, j + 1
    return N, k


def telescoper(p: BivarPoly, q: BivarPoly, order: int | None = None) -> InstanceReport:
    """Minimal ``L(x, d/dx)`` with ``L(p/q)`` a derivative in ``y``."""
    t0 = time.perf_counter()
    if not (p.is_polynomial() and q.is_polynomial()):
        raise InstanceError("p and q must be polynomial in x and y")
    if p.is_zero():
        raise InstanceError("p must be nonzero")
    r, d = q.deg_y, q.deg_x
    if r < 1:
        raise InstanceError("q must depend on y")
    if p.deg_y >= r:
        raise InstanceError("need deg_y p < deg_y q")
    if p.deg_x > d:
        raise InstanceError("need deg_x p <= deg_x q")
    bez = _bezout(q)
    qx = q.diff_x()
    cols = []
    for j in range(r):
        red = hermite_reduce(qx * BivarPoly([0] * j + [1]), q, 2, bez)
        cols.append(_vector(-red.r, r))
    theta = PseudoLinearMap(DX, RatMatrix.from_columns(cols))
    seed = KrylovSeed(tuple(c.as_poly() for c in _vector(p, r)))
    rep = _solve("Hermite", theta, seed, {"r": r, "d": d}, order, t0, {"p": p, "q": q})
    # certificate of L(f) = d/dy(h)
    N, k = _apply_operator_y(rep.operator, p, q)
    cert = hermite_reduce(N, q, k, bez)
    if not cert.r.is_zero():
        raise AssertionError("telescoper leaves a nonzero Hermite remainder")
    rep.inputs["certificate"] = cert
    return rep


def telescoper_realisation(q: BivarPoly) -> Realisation:
    """``T = X M^{-1} Y`` with ``M: (A, b) -> q A_y - q_y A + q b`` and ``Y = -q_x``."""
    r = q.deg_y
    qx, qy = q.diff_x(), q.diff_y()
    y = BivarPoly.y()
    cols = [(y ** i).diff_y() * q - y ** i * qy for i in range(r)] + [y ** i * q for i in range(r)]
    M = _coeff_matrix(cols, 2 * r)
    Y = _coeff_matrix([-qx * y ** j for j in range(r)], 2 * r)
    X = PolyMatrix([[Poly([int(c == r + i)]) for c in range(2 * r)] for i in range(r)])
    return Realisation(X, M, Y)


# -- McMillan degree report ---------------------------------------------------

def instance_degmm_report(rep: InstanceReport) -> tuple[int, int]:
    """``(degMM(T), closed-form bound)`` for a solved instance."""
    if rep.theta is None:
        raise InstanceError("instance has no pseudo-linear map")
    actual = rep.theta.degmm_T
    params = {k: v for k, v in rep.params.items()}
    fam = {"SymPower": "Polynomials", "Associate": "Polynomials", "Wronskian": "Polynomials"}.get(
        rep.family, rep.family)
    bound = math.floor(degmm_bound(fam, params))
    if actual > bound:
        raise AssertionError(f"degMM(T) = {actual} exceeds {bound} for {rep.family}")
    return actual, bound
