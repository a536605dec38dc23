"""Random desk-scale inputs for property sweeps and ``check``.

All generators take a ``random.Random`` so that a seed pins every trial.
"""

from __future__ import annotations

import random

from .algebra import Poly, RatFunc
from .bivariate import BivarPoly
from .closure import ClosurePoly
from .ore import DX, EX, SX, OreKind, OrePoly
from .pseudokrylov import KrylovSeed, PseudoLinearMap
from .ratmat import RatMatrix

COEFF = 5


def trial_rng(seed: int, label: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{label}:{index}")


def random_poly(rng: random.Random, d: int, nonzero: bool = False, exact: bool = False) -> Poly:
    while True:
        cs = [rng.randint(-COEFF, COEFF) for _ in range(d + 1)]
        if exact and d >= 0 and cs[-1] == 0:
            cs[-1] = rng.choice([-1, 1]) * rng.randint(1, COEFF)
        p = Poly(cs)
        if p or not nonzero:
            return p


def random_ratfunc(rng: random.Random, d: int, den_degree: int = 1) -> RatFunc:
    num = random_poly(rng, d)
    den = random_poly(rng, rng.randint(0, den_degree), nonzero=True)
    return RatFunc(num, den)


def random_kind(rng: random.Random) -> OreKind:
    return rng.choice([DX, EX, SX])


def random_operator(rng: random.Random, kind: OreKind, r: int, d: int) -> OrePoly:
    """Order exactly ``r``, coefficient degrees at most ``d``."""
    cs = [random_poly(rng, d) for _ in range(r)]
    cs.append(random_poly(rng, d, nonzero=True))
    if not any(cs[:-1]):
        cs[0] = Poly([1])
    return OrePoly(kind, cs).normalized()


def random_map(rng: random.Random, n: int, d: int, kind: OreKind | None = None,
               density: float = 0.7) -> tuple[PseudoLinearMap, KrylovSeed]:
    kind = kind or random_kind(rng)
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if rng.random() < density:
                row.append(random_ratfunc(rng, rng.randint(0, d), den_degree=min(d, 1)))
            else:
                row.append(RatFunc())
        rows.append(row)
    while True:
        a = tuple(random_poly(rng, rng.randint(0, 2)) for _ in range(n))
        if any(a):
            break
    return PseudoLinearMap(kind, RatMatrix(rows)), KrylovSeed(a)


def random_rational_matrix(rng: random.Random, rows: int, cols: int, d: int) -> RatMatrix:
    return RatMatrix([[random_ratfunc(rng, rng.randint(0, d), den_degree=d) if rng.random() < 0.8 else RatFunc()
                       for _ in range(cols)] for _ in range(rows)])


def random_rank_deficient(rng: random.Random, rows: int, cols: int, d: int) -> RatMatrix:
    """A product of random factors with inner dimension below ``min(rows, cols)``
    (or ``cols - 1`` when the matrix is tall)."""
    k = max(1, min(rows, cols - 1) - rng.randint(0, 1))
    A = RatMatrix([[random_ratfunc(rng, rng.randint(0, 1), den_degree=1) for _ in range(k)] for _ in range(rows)])
    B = RatMatrix([[random_ratfunc(rng, rng.randint(0, max(d - 1, 0)), den_degree=1) for _ in range(cols)]
                   for _ in range(k)])
    return A @ B


def random_bivariate(rng: random.Random, d: int, r: int, deg_y_exact: bool = True) -> BivarPoly:
    cs = [random_poly(rng, d) for _ in range(r)]
    cs.append(random_poly(rng, d, nonzero=deg_y_exact))
    return BivarPoly(cs)


def random_squarefree(rng: random.Random, d: int, r: int) -> BivarPoly:
    while True:
        P = random_bivariate(rng, d, r)
        if P.deg_y == r and P.deg_x >= 1 and P.is_squarefree():
            return P.primitive()


def random_with_root(rng: random.Random, d: int, r: int) -> BivarPoly:
    """Square-free ``P`` with a simple rational root over ``x = 0``."""
    while True:
        Q = random_bivariate(rng, d, r)
        y0 = rng.randint(-2, 2)
        P = Q - BivarPoly([Q.eval_xy(0, y0)])
        if P.deg_y != r or P.deg_x < 1 or not P.is_squarefree():
            continue
        if P.diff_y().eval_xy(0, y0) == 0:
            continue
        return P.primitive()


def random_telescoper_input(rng: random.Random, d: int, r: int) -> tuple[BivarPoly, BivarPoly]:
    q = random_squarefree(rng, d, r)
    dq = q.deg_x
    while True:
        p = BivarPoly([random_poly(rng, rng.randint(0, dq)) for _ in range(r)])
        if p:
            return p, q


def random_homogeneous_J(rng: random.Random, rs: list[int], max_total: int = 3) -> ClosurePoly:
    """Homogeneous in each group, total degree at most ``max_total``."""
    s = len(rs)
    while True:
        ks = [rng.randint(0, 2) for _ in range(s)]
        if 0 < sum(ks) <= max_total:
            break
    J = ClosurePoly()
    for _ in range(rng.randint(1, 3)):
        t = ClosurePoly.const(random_poly(rng, rng.randint(0, 1), nonzero=True))
        for i, (k, r) in enumerate(zip(ks, rs)):
            for _ in range(k):
                t = t * ClosurePoly.var(i + 1, rng.randrange(r))
        J = J + t
    if J.is_zero():
        return random_homogeneous_J(rng, rs, max_total)
    return J
