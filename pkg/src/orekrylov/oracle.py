"""Independent checks for computed operators and relations.

Nothing here calls the Krylov solver, the minimal-kernel search or the
Hermite reduction used by the instances: series and sequences are
unrolled from coefficient recurrences, relations are found by a plain
degree sweep on the full coefficient system, and telescoper certificates
come from the Ostrogradsky linear system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from flint import fmpz_mat

from .algebra import Poly, RatFunc
from .bivariate import BivarPoly
from .ore import DX, OrePoly
from .pseudokrylov import KrylovSeed, PseudoLinearMap, Relation, theta_apply
from .ratmat import RatMatrix
from .series import SeqWindow, TruncSeries

__all__ = [
    "TruncSeries",
    "SeqWindow",
    "SeriesBasis",
    "OracleError",
    "series_solution_basis",
    "sequence_solution",
    "find_simple_root",
    "newton_algebraic_series",
    "compose_series",
    "brute_force_relation",
    "TelescoperCertificate",
    "verify_telescoper",
    "Verification",
    "verify_instance",
    "mcmillan_by_poles",
]

SHIFT_BUDGET = 50


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class SeriesBasis:
    """Solutions expanded in powers of ``x - point``."""

    series: tuple[TruncSeries, ...]
    point: Fraction


def _dx_polynomial_form(L: OrePoly) -> list[Poly]:
    if L.kind.is_shift:
        raise OracleError("series solutions need a differential operator")
    return L.to_dx().polynomial_coeffs()


def series_solution_basis(L: OrePoly, N: int, point: int | Fraction | None = None) -> SeriesBasis:
    """``order(L)`` series solutions with unit initial segments.

    Without an explicit ``point`` the first ordinary point among
    ``0, 1, ..., 50`` is used.
    """
    cs = _dx_polynomial_form(L)
    r = len(cs) - 1
    if r < 1:
        raise OracleError("operator of order 0 has no nonzero solutions")
    if point is None:
        for c in range(SHIFT_BUDGET + 1):
            if cs[-1](c) != 0:
                point = Fraction(c)
                break
        else:
            raise OracleError("no ordinary point found in the shift budget")
    point = Fraction(point)
    if cs[-1](point) == 0:
        raise OracleError(f"{point} is a singular point")
    # coefficients of c_i(t + point)
    sh = [[c for c in p.shift(point).coeffs()] for p in cs]
    lead = sh[r][0]
    out = []
    for k0 in range(r):
        y = [Fraction(0)] * max(N, r)
        y[k0] = Fraction(1)
        # coefficient of t^k in L(y) fixes y_{k+r}
        for k in range(0, N - r):
            acc = Fraction(0)
            for i, ci in enumerate(sh):
                for j, cij in enumerate(ci):
                    idx = k - j + i
                    if cij == 0 or idx < 0 or (i == r and j == 0):
                        continue
                    ff = math.prod(range(idx - i + 1, idx + 1))
                    acc += cij * ff * y[idx]
            y[k + r] = -acc / (lead * math.prod(range(k + 1, k + r + 1)))
        out.append(TruncSeries(y[:N], N))
    return SeriesBasis(tuple(out), point)


def sequence_solution(L: OrePoly, init: Sequence, N: int, start: int = 0) -> SeqWindow:
    """Unroll ``sum c_i(n) u(n+i) = 0`` from ``init = u(start), ...``."""
    if L.kind.is_diff:
        raise OracleError("sequence solutions need a shift operator")
    cs = L.polynomial_coeffs()
    r = len(cs) - 1
    if len(init) != r:
        raise ValueError(f"need {r} initial values, got {len(init)}")
    u = [Fraction(v) for v in init]
    while len(u) < N:
        n = start + len(u) - r
        lead = cs[r](n)
        if lead == 0:
            raise OracleError(f"leading coefficient vanishes at n = {n}")
        acc = sum((cs[i](n) * u[n - start + i] for i in range(r)), Fraction(0))
        u.append(-acc / lead)
    return SeqWindow(tuple(u[:N]), start)


def find_simple_root(P: BivarPoly, budget: int = SHIFT_BUDGET) -> tuple[Fraction, Fraction]:
    """``(c, y0)`` with ``P(c, y0) = 0`` and ``P_y(c, y0) != 0``."""
    Py = P.diff_y()
    for c in range(budget + 1):
        try:
            vals = P.eval_x(c)
        except ZeroDivisionError:
            continue
        if not any(vals) or vals[-1] == 0:
            continue
        for y0 in Poly(vals).rational_roots():
            if Py.eval_xy(c, y0) != 0:
                return Fraction(c), y0
    raise OracleError("no simple rational root found in the shift budget")


def newton_algebraic_series(P: BivarPoly, y0, N: int, point=0) -> TruncSeries:
    """Root ``g`` of ``P(x, g) = 0`` expanded at ``point`` with ``g(point) = y0``."""
    y0 = Fraction(y0)
    point = Fraction(point)
    if P.eval_xy(point, y0) != 0:
        raise OracleError(f"P({point}, {y0}) != 0")
    Py = P.diff_y()
    if Py.eval_xy(point, y0) == 0:
        raise OracleError("root is not simple")
    Ps = P.shift_x(point)
    Pys = Py.shift_x(point)
    g = TruncSeries([y0], 1)
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        g = TruncSeries(g.coeffs, prec)
        num = Ps.subs_y(g)
        den = Pys.subs_y(g)
        g = g - num * _series_inverse(den)
        g = TruncSeries(g.coeffs[:prec], prec)
    return g


def _series_inverse(s: TruncSeries) -> TruncSeries:
    cs = s.coeffs
    if cs[0] == 0:
        raise ZeroDivisionError("series with zero constant term")
    n = s.precision
    inv = [Fraction(0)] * n
    inv[0] = 1 / cs[0]
    for k in range(1, n):
        inv[k] = -sum((cs[j] * inv[k - j] for j in range(1, k + 1)), Fraction(0)) / cs[0]
    return TruncSeries(inv, n)


def compose_series(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """``f(g)`` where ``f`` is expanded at ``g(0)`` (Horner in ``g - g(0)``)."""
    h = g - g[0]
    n = g.precision
    acc = TruncSeries([], n)
    for c in reversed(f.coeffs):
        acc = acc * h + c
    if h.valuation() * f.precision < n:
        n = h.valuation() * f.precision
    return acc.truncate(n)


# -- relations by exhaustive degree sweep ------------------------------------

def _normalise(eta: list[Poly]) -> tuple[Poly, ...]:
    g = Poly()
    for e in eta:
        if e:
            g = g.gcd(e)
    eta = [e.exquo(g) for e in eta]
    den = math.lcm(*(c.denominator for e in eta for c in e.coeffs()))
    ints = [[int(c * den) for c in e.coeffs()] for e in eta]
    content = math.gcd(*(c for cs in ints for c in cs))
    last = next(e for e in reversed(eta) if e)
    s = -1 if last.lc < 0 else 1
    return tuple(Poly([s * c // content for c in cs]) for cs in ints)


def _integer_rows(A: list[list[Poly]]) -> list[list[list[int]]]:
    """Scale each row to integer coefficients (the kernel is unchanged)."""
    out = []
    for r in A:
        den = math.lcm(*(c.denominator for e in r for c in e.coeffs()))
        out.append([[int(c * den) for c in e.coeffs()] for e in r])
    return out


def _kernel_at_degree(A: list[list[list[int]]], delta: int) -> list[list[Fraction]] | None:
    """A nonzero ``eta`` of degree <= delta with ``A eta = 0``, if any."""
    ncol = len(A[0])
    w = delta + 1
    nunk = ncol * w
    rows = []
    for r in A:
        top = max(len(e) for e in r) - 1
        if top < 0:
            continue
        for t in range(top + w):
            row = [0] * nunk
            for j, e in enumerate(r):
                for k in range(max(0, t - len(e) + 1), min(w, t + 1)):
                    row[j * w + k] = e[t - k]
            if any(row):
                rows.append(row)
    if not rows:
        return [[Fraction(int(i == 0)) for i in range(w)]] + [[Fraction(0)] * w] * (ncol - 1)
    K, nullity = fmpz_mat(rows).nullspace()
    if nullity == 0:
        return None
    v = [Fraction(int(K[i, 0])) for i in range(nunk)]
    return [v[j * w:(j + 1) * w] for j in range(ncol)]


def brute_force_relation(theta: PseudoLinearMap, seed: KrylovSeed) -> Relation:
    """First dependency among ``a, theta(a), ..., theta^n(a)`` by plain
    elimination, then the least degree found by sweeping ``delta``."""
    n = theta.n
    cols = [seed.vector()]
    for _ in range(n):
        cols.append(theta_apply(theta, cols[-1]))
    E, pivots = RatMatrix.from_columns(cols).rref()
    rho = next(j for j in range(n + 1) if j not in pivots)
    K = RatMatrix.from_columns(cols[: rho + 1])
    A, _ = K.clear_rows()
    A = _integer_rows([r for r in A if any(r)])
    if not A:
        eta = [Poly([1])] + [Poly()] * rho
        return Relation(rho, _normalise(eta))
    # exponential then binary search; feasibility is monotone in delta
    hi = 1
    while _kernel_at_degree(A, hi) is None:
        hi *= 2
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        if _kernel_at_degree(A, mid) is None:
            lo = mid + 1
        else:
            hi = mid
    sol = _kernel_at_degree(A, lo)
    eta = [Poly(c) for c in sol]
    return Relation(rho, _normalise(eta))


# -- telescoper certificates -------------------------------------------------

@dataclass(frozen=True)
class TelescoperCertificate:
    """``L(f) = d/dy(A / q^(k-1)) + B/q``; a telescoper has ``B = 0``."""

    ok: bool
    A: BivarPoly
    B: BivarPoly
    q: BivarPoly
    k: int

    def certificate(self) -> tuple[BivarPoly, BivarPoly]:
        """Numerator and denominator of ``h`` with ``L(f) = d/dy h``."""
        return self.A, self.q ** (self.k - 1)


def _apply_x_operator(L: OrePoly, p: BivarPoly, q: BivarPoly) -> tuple[BivarPoly, int]:
    """``L(p/q) = N/q^k`` for a ``d/dx`` operator."""
    L = L.to_dx() if L.kind != DX else L
    qx = q.diff_x()
    num, k = p, 1
    terms = []
    for c in L.coeffs:
        terms.append((c, num, k))
        num, k = num.diff_x() * q - num * qx * k, k + 1
    top = terms[-1][2]
    N = BivarPoly()
    for c, t, kk in terms:
        if c:
            N = N + t * q ** (top - kk) * c
    return N, top


def verify_telescoper(L: OrePoly, p: BivarPoly, q: BivarPoly) -> TelescoperCertificate:
    if L.kind.is_shift:
        raise OracleError("telescopers here are differential operators")
    N, k = _apply_x_operator(L, p, q)
    r = q.deg_y
    qy = q.diff_y()
    qk1 = q ** (k - 1)
    nunk = k * r
    cols = []
    for j in range((k - 1) * r):
        yj = BivarPoly([0] * j + [1])
        cols.append(yj.diff_y() * q - yj * qy * (k - 1))
    for j in range(r):
        cols.append(BivarPoly([0] * j + [1]) * qk1)
    if N.deg_y >= nunk:
        raise OracleError("L(f) is not proper in y")
    M = RatMatrix([[c[i] for c in cols] + [N[i]] for i in range(nunk)])
    E, piv = M.rref()
    if piv != list(range(nunk)):
        raise OracleError("singular Ostrogradsky system; q not square-free in y?")
    z = [E[i, nunk] for i in range(nunk)]
    A = BivarPoly(z[: (k - 1) * r])
    B = BivarPoly(z[(k - 1) * r:])
    # exact re-check of N = A_y q - (k-1) A q_y + B q^(k-1)
    if A.diff_y() * q - A * qy * (k - 1) + B * qk1 != N:
        raise AssertionError("Ostrogradsky solution does not reproduce L(f)")
    return TelescoperCertificate(B.is_zero(), A, B, q, k)


# -- end-to-end verification of instance outputs -------------------------------

@dataclass(frozen=True)
class Verification:
    ok: bool
    method: str
    exact: bool
    detail: str = ""


def _ordinary_point(polys: Sequence[Poly], budget: int = SHIFT_BUDGET) -> int:
    for c in range(budget + 1):
        if all(p(c) != 0 for p in polys):
            return c
    raise OracleError("no common ordinary point in the shift budget")


def _theta_series(kind, s: TruncSeries, c) -> TruncSeries:
    d = s.derivative()
    p = kind.p.shift(c)
    return d if p == 1 else d * TruncSeries.from_poly(p, d.precision)


def _eval_closure_series(J, kind, sols: Sequence[TruncSeries], c) -> TruncSeries:
    n = min(s.precision for s in sols)
    derivs: dict[tuple[int, int], TruncSeries] = {}

    def y(i: int, j: int) -> TruncSeries:
        if (i, j) not in derivs:
            derivs[(i, j)] = sols[i - 1] if j == 0 else _theta_series(kind, y(i, j - 1), c)
        return derivs[(i, j)]

    acc = TruncSeries([], n)
    for mono, coef in J.terms.items():
        t = TruncSeries.from_ratfunc(coef.shift(c), n)
        for (i, j), e in mono:
            for _ in range(e):
                t = t * y(i, j)
        acc = acc + t
    return acc


def _eval_closure_seq(J, sols: Sequence[SeqWindow]) -> SeqWindow:
    lo = max(s.start for s in sols)
    jmax = max((j for mono in J.terms for (_, j), _ in mono), default=0)
    hi = min(s.start + len(s) for s in sols) - jmax
    vals = []
    for n in range(lo, hi):
        acc = Fraction(0)
        for mono, coef in J.terms.items():
            t = coef(n)
            for (i, j), e in mono:
                t *= sols[i - 1].at(n + j) ** e
            acc += t
        vals.append(acc)
    return SeqWindow(tuple(vals), lo)


def _selections(bases: Sequence[Sequence], multilinear: bool, rng) -> list[list]:
    import itertools

    sel = []
    if multilinear:
        sel.extend(list(t) for t in itertools.product(*bases))
    for _ in range(3):
        pick = []
        for B in bases:
            w = [rng.randint(-3, 3) for _ in B]
            if not any(w):
                w[0] = 1
            acc = None
            for wk, b in zip(w, B):
                if wk:
                    term = b * wk if isinstance(b, TruncSeries) else SeqWindow(tuple(v * wk for v in b.values), b.start)
                    acc = term if acc is None else acc + term
            pick.append(acc)
        sel.append(pick)
    return sel


def _closure_check(op: OrePoly, J, Ls: Sequence[OrePoly], N: int, rng) -> Verification:
    jmax = max((j for mono in J.terms for (_, j), _ in mono), default=0)
    multilinear = all(e == 1 for mono in J.terms for _, e in mono) and all(
        len({i for (i, _), _ in mono}) == len(mono) for mono in J.terms)
    extra = op.order + jmax + 2
    if op.kind.is_shift:
        lcs = [L.polynomial_coeffs()[-1] for L in Ls] + [J.common_denominator()]
        roots = [int(z) for p in lcs for z in p.rational_roots() if z.denominator == 1]
        start = max([0] + [z + 1 for z in roots])
        bases = []
        for L in Ls:
            r = L.order
            bases.append([sequence_solution(L, [int(i == k) for i in range(r)], N + extra, start)
                          for k in range(r)])
        for sols in _selections(bases, multilinear, rng):
            out = op(_eval_closure_seq(J, sols))
            if len(out) < N:
                raise OracleError("sequence window too short")
            if not out.is_zero():
                return Verification(False, "sequence", False, "operator does not annihilate J(solutions)")
        return Verification(True, "sequence", False, f"{N} terms from n = {start}")
    polys = [L.to_dx().polynomial_coeffs()[-1] for L in Ls] + [J.common_denominator()]
    c = _ordinary_point(polys)
    bases = [list(series_solution_basis(L, N + extra, point=c).series) for L in Ls]
    opc = op.translate(c)
    for sols in _selections(bases, multilinear, rng):
        out = opc(_eval_closure_series(J, op.kind, sols, c))
        if out.precision < N:
            raise OracleError("series precision too low")
        if not out.is_zero():
            return Verification(False, "series", False, "operator does not annihilate J(solutions)")
    return Verification(True, "series", False, f"precision {N} at x = {c}")


def _simple_roots(P: BivarPoly, extra=None, budget: int = SHIFT_BUDGET):
    """First ``c`` with simple rational roots ``y0`` of ``P(c, y)``."""
    Py = P.diff_y()
    for c in range(budget + 1):
        try:
            vals = P.eval_x(c)
        except ZeroDivisionError:
            continue
        if not any(vals):
            continue
        # a vanishing leading coefficient is harmless at a simple root
        ys = [y0 for y0 in Poly(vals).rational_roots()
              if Py.eval_xy(c, y0) != 0 and (extra is None or extra(y0))]
        if ys:
            return Fraction(c), ys
    raise OracleError("no simple rational root found in the shift budget")


def verify_instance(rep, precision: int | None = None, rng=None) -> Verification:
    """Check a solved instance with the oracle suited to its family."""
    import random

    rng = rng or random.Random(0)
    op = rep.operator
    N = max(precision or 0, 60, 2 * (op.order + op.degree))
    fam = rep.family
    inp = rep.inputs
    if fam == "LCLM":
        from .ore import ore_right_divrem

        for L in inp["Ls"]:
            if not ore_right_divrem(op, L)[1].is_zero():
                return Verification(False, "right division", True, f"nonzero remainder by {L}")
        return Verification(True, "right division", True)
    if fam == "SymProd":
        from .closure import ClosurePoly

        J = ClosurePoly.const(1)
        for i in range(len(inp["Ls"])):
            J = J * ClosurePoly.var(i + 1, 0)
        return _closure_check(op, J, inp["Ls"], N, rng)
    if fam in ("Polynomials", "SymPower", "Associate", "Wronskian"):
        return _closure_check(op, inp["J"], inp["Ls"], N, rng)
    if fam == "AlgeqToDiffeq":
        P = inp["P"]
        c, ys = _simple_roots(P)
        opc = op.translate(c)
        for y0 in ys:
            g = newton_algebraic_series(P, y0, N + op.order + 1, point=c)
            if not opc(g).is_zero():
                return Verification(False, "Newton series", False, f"root through ({c}, {y0}) not annihilated")
        return Verification(True, "Newton series", False, f"{len(ys)} root(s) at x = {c}, precision {N}")
    if fam == "Composition":
        P, L = inp["P"], inp["L"]
        lc = L.to_dx().polynomial_coeffs()[-1]
        c, ys = _simple_roots(P, lambda y0: lc(y0) != 0)
        opc = op.translate(c)
        n = N + op.order + 1
        for y0 in ys:
            g = newton_algebraic_series(P, y0, n, point=c)
            for f in series_solution_basis(L, n, point=y0).series:
                if not opc(compose_series(f, g)).is_zero():
                    return Verification(False, "composed series", False, f"branch through ({c}, {y0}) fails")
        return Verification(True, "composed series", False, f"{len(ys)} branch(es) at x = {c}, precision {N}")
    if fam == "Hermite":
        cert = verify_telescoper(op, inp["p"], inp["q"])
        return Verification(cert.ok, "Ostrogradsky certificate", True,
                            "" if cert.ok else "nonzero remainder")
    raise OracleError(f"no oracle for family {fam!r}")


# -- McMillan degree by pole enumeration ---------------------------------------

def _leibniz_det(rows: list[list[RatFunc]]) -> RatFunc:
    import itertools

    n = len(rows)
    acc = RatFunc()
    for perm in itertools.permutations(range(n)):
        sign = -1 if sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b]) % 2 else 1
        t = RatFunc(sign)
        for i, j in enumerate(perm):
            t = t * rows[i][j]
            if not t:
                break
        acc = acc + t
    return acc


def mcmillan_by_poles(R: RatMatrix) -> int:
    """Sum over all poles, infinity included, of the largest pole order
    among the minors of ``R``."""
    import itertools

    minors = []
    for k in range(1, min(R.rows, R.cols) + 1):
        for rs in itertools.combinations(range(R.rows), k):
            for cs in itertools.combinations(range(R.cols), k):
                m = _leibniz_det([[R[i, j] for j in cs] for i in rs])
                if m:
                    minors.append(m)
    finite: dict[tuple, tuple[int, int]] = {}
    at_inf = 0
    for m in minors:
        at_inf = max(at_inf, int(m.num.degree - m.den.degree))
        if m.den.degree > 0:
            _, facs = m.den._p.factor()
            for f, e in facs:
                key = tuple(f.coeffs())
                prev = finite.get(key, (0, f.degree()))[0]
                finite[key] = (max(prev, e), f.degree())
    return at_inf + sum(e * dg for e, dg in finite.values())
