"""Randomized property trials shared by ``check`` and the test-suite.

A trial builds one random input from its ``random.Random``, runs the
solver and its independent oracle, and records named boolean checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .bounds import BoundQuery, evaluate_bound
from .instances import (InstanceReport, associate, compose_annihilator, differential_resolvent,
                        instance_degmm_report, lclm, polynomial_closure, sym_power, symmetric_product,
                        telescoper, wronskian_annihilator)
from .nullspace import kronecker_indices
from .oracle import brute_force_relation, mcmillan_by_poles, verify_instance
from .ore import DX, EX, SX
from .pseudokrylov import krylov_mcmillan_check, min_relation, relation_at_order
from .randgen import (random_homogeneous_J, random_map, random_operator, random_rank_deficient,
                      random_rational_matrix, random_telescoper_input, random_with_root,
                      trial_rng)
from .ratmat import mcmillan_degree, mcmillan_degree_via_mobius

__all__ = ["Trial", "FAMILIES", "run_trial", "run_family"]


@dataclass
class Trial:
    checks: dict[str, bool] = field(default_factory=dict)
    stats: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _instance_checks(t: Trial, rep: InstanceReport, bound: int | None = None, rng=None):
    b = rep.bound if bound is None else bound
    t.checks["degree_bound"] = rep.degree <= b
    t.checks["oracle"] = verify_instance(rep, rng=rng).ok
    if rep.theta is not None:
        actual, mm = instance_degmm_report(rep)
        t.checks["degmm_T"] = actual <= mm
        t.stats.update(degmm_T=actual, degmm_bound=mm)
    t.stats.update(order=rep.order, degree=rep.degree, bound=b,
                   tightness=round(rep.degree / b, 4) if b else None)


def trial_relation(rng: random.Random, n_max: int = 4, d: int = 3, extra_orders: int = 3) -> Trial:
    """Fast path against brute force, order-degree bound and Krylov degMM."""
    theta, seed = random_map(rng, rng.randint(1, n_max), d, rng.choice([DX, EX, SX]))
    t = Trial()
    fast = min_relation(theta, seed)
    slow = brute_force_relation(theta, seed)
    t.checks["order_match"] = fast.order == slow.order
    t.checks["eta_match"] = fast.eta == slow.eta
    rho = fast.order
    ok_bound = ok_mm = True
    for m in range(rho, rho + extra_orders + 1):
        rel = fast if m == rho else relation_at_order(theta, seed, m)
        b = evaluate_bound(BoundQuery("Generic", {"rho": rho, "d_a": seed.d_a, "degmm_T": theta.degmm_T}, m))
        ok_bound &= rel.degree <= b
        actual, mm = krylov_mcmillan_check(theta, seed, m)
        ok_mm &= actual <= mm
    t.checks["order_degree"] = ok_bound
    t.checks["krylov_degmm"] = ok_mm
    t.stats.update(n=theta.n, kind=theta.kind.symbol, rho=rho, degree=fast.degree)
    return t


def trial_kronecker(rng: random.Random, rows_max: int = 4, cols_max: int = 6, d: int = 3) -> Trial:
    rows, cols = rng.randint(1, rows_max), rng.randint(2, cols_max)
    R = random_rank_deficient(rng, rows, cols, d)
    ki, basis = kronecker_indices(R)
    mm = mcmillan_degree(R)
    t = Trial({"sum_le_degmm": ki.total <= mm,
               "kernel": all(not any(R.apply(v)) for v in basis.vectors)})
    t.stats.update(shape=[rows, cols], indices=list(ki.indices), degmm=mm)
    return t


def trial_mcmillan(rng: random.Random, size_max: int = 4, d: int = 2) -> Trial:
    rows, cols = rng.randint(1, size_max), rng.randint(1, size_max)
    R = random_rational_matrix(rng, rows, cols, d)
    a = mcmillan_degree(R)
    b = mcmillan_degree_via_mobius(R, rng=rng)
    t = Trial({"mobius_agrees": a == b})
    if rows <= 3 and cols <= 3:
        t.checks["poles_agree"] = a == mcmillan_by_poles(R)
    t.stats.update(shape=[rows, cols], degmm=a)
    return t


def trial_lclm(rng: random.Random, r_max: int = 3, d_max: int = 3) -> Trial:
    kind = rng.choice([DX, SX])
    s = rng.choice([2, 3])
    if s == 3:
        # keep triples at desk scale
        r_max, d_max = min(r_max, 2), min(d_max, 2)
    Ls = [random_operator(rng, kind, rng.randint(1, r_max), rng.randint(0, d_max)) for _ in range(s)]
    rep = lclm(Ls)
    t = Trial()
    _instance_checks(t, rep, rng=rng)
    t.stats.update(kind=kind.symbol, s=s)
    return t


def trial_symprod(rng: random.Random, r_max: int = 2, d_max: int = 2) -> Trial:
    kind = rng.choice([DX, SX])
    Ls = [random_operator(rng, kind, rng.randint(1, r_max), rng.randint(0, d_max)) for _ in range(2)]
    rep = symmetric_product(Ls)
    t = Trial()
    _instance_checks(t, rep, rng=rng)
    t.stats.update(kind=kind.symbol)
    return t


def trial_closure(rng: random.Random, r_max: int = 2, d_max: int = 2) -> Trial:
    kind = rng.choice([DX, SX])
    s = rng.choice([1, 2])
    Ls = [random_operator(rng, kind, rng.randint(1, r_max), rng.randint(0, d_max)) for _ in range(s)]
    J = random_homogeneous_J(rng, [L.order for L in Ls])
    rep = polynomial_closure(J, Ls)
    t = Trial()
    _instance_checks(t, rep, rng=rng)
    t.stats.update(kind=kind.symbol, J=str(J))
    return t


def trial_corollary(rng: random.Random) -> Trial:
    which = rng.choice(["sympower", "associate", "wronskian"])
    if which == "sympower":
        L = random_operator(rng, DX, rng.randint(1, 2), rng.randint(0, 2))
        rep = sym_power(L, rng.randint(2, 3))
    elif which == "associate":
        L = random_operator(rng, DX, rng.randint(2, 3), rng.randint(0, 2))
        A = random_operator(rng, DX, rng.randint(0, L.order - 1), rng.randint(0, 2))
        rep = associate(L, A)
    else:
        r = rng.randint(1, 2)
        rep = wronskian_annihilator([random_operator(rng, DX, r, rng.randint(0, 2)) for _ in range(r)])
    t = Trial()
    _instance_checks(t, rep, rng=rng)
    t.stats.update(kind=which, family=rep.family)
    return t


def trial_resolvent(rng: random.Random, d_max: int = 3, r_max: int = 3) -> Trial:
    d, r = rng.randint(1, d_max), rng.randint(1, r_max)
    P = random_with_root(rng, d, r)
    rep = differential_resolvent(P)
    t = Trial()
    _instance_checks(t, rep, rng=rng)
    literal = evaluate_bound(BoundQuery("AlgeqToDiffeq", rep.params))
    t.stats.update(P=str(P), literal_bound=literal, r=P.deg_y, d=P.deg_x,
                   polynomial_seed=rep.seed is not None or rep.order == 0)
    return t


def trial_compose(rng: random.Random) -> Trial:
    while True:
        P = random_with_root(rng, rng.randint(1, 2), rng.randint(1, 2))
        L = random_operator(rng, DX, rng.randint(1, 2), rng.randint(0, 1))
        try:
            rep = compose_annihilator(P, L)
            break
        except ValueError:
            continue
    t = Trial()
    _instance_checks(t, rep, rng=rng)
    literal = evaluate_bound(BoundQuery("Composition", {k: v for k, v in rep.params.items() if k != "e_lc"}))
    t.stats.update(P=str(P), L=str(L), literal_bound=literal, monic_y=P[P.deg_y].as_poly().degree == 0)
    return t


def trial_telescope(rng: random.Random, d_max: int = 3, r_max: int = 3) -> Trial:
    p, q = random_telescoper_input(rng, rng.randint(1, d_max), rng.randint(1, r_max))
    rep = telescoper(p, q)
    t = Trial()
    _instance_checks(t, rep, rng=rng)
    t.stats.update(p=str(p), q=str(q))
    return t


FAMILIES: dict[str, Callable[[random.Random], Trial]] = {
    "relation": trial_relation,
    "kronecker": trial_kronecker,
    "mcmillan": trial_mcmillan,
    "lclm": trial_lclm,
    "symprod": trial_symprod,
    "closure": trial_closure,
    "corollary": trial_corollary,
    "resolvent": trial_resolvent,
    "compose": trial_compose,
    "telescope": trial_telescope,
}


def run_trial(family: str, seed: int, index: int, **kw) -> Trial:
    return FAMILIES[family](trial_rng(seed, family, index), **kw)


def run_family(family: str, seed: int, trials: int, **kw) -> list[Trial]:
    return [run_trial(family, seed, i, **kw) for i in range(trials)]
