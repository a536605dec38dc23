import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orekrylov.algebra import Mobius, Poly, poly_gcd, poly_lcm
from orekrylov.instances import resolvent_realisation
from orekrylov.oracle import mcmillan_by_poles
from orekrylov.randgen import random_rational_matrix
from orekrylov.ratmat import (PolyMatrix, Realisation, determinantal_denominators,
                              find_proper_mobius, mcmillan_degree, mcmillan_degree_via_mobius, minor_degree,
                              poly_det, realisation_degree_bound, smith_mcmillan, smith_normal_form)

from conftest import biv, mat

X = Poly.x()


def pm(rows) -> PolyMatrix:
    return PolyMatrix([[Poly(e) if isinstance(e, list) else e for e in r] for r in rows])


def minors(A, k):
    for rows in itertools.combinations(range(A.rows), k):
        for cols in itertools.combinations(range(A.cols), k):
            yield A.submatrix(rows, cols)


def determinantal_divisors(A: PolyMatrix) -> list[Poly]:
    """gcd of all k x k minors, k = 1..rank (enumeration oracle)."""
    out = []
    for k in range(1, min(A.shape) + 1):
        g = Poly()
        for sub in minors(A, k):
            g = poly_gcd(g, poly_det(sub.entries))
        if g.is_zero():
            break
        out.append(g)
    return out


def random_polymatrix(rng, rows, cols, d):
    return PolyMatrix([[Poly([rng.randint(-3, 3) for _ in range(rng.randint(0, d) + 1)]) for _ in range(cols)]
                       for _ in range(rows)])


# -- Smith normal form -------------------------------------------------------

def test_snf_already_in_form():
    _, S, _ = smith_normal_form(pm([[[0, 1], []], [[], [0, 0, 1]]]))
    assert S == pm([[[0, 1], []], [[], [0, 0, 1]]])


def test_snf_reorders_to_divisibility_chain():
    _, S, _ = smith_normal_form(pm([[[0, 1], []], [[], [1]]]))
    assert S == pm([[[1], []], [[], [0, 1]]])


@pytest.mark.parametrize("seed", range(8))
def test_snf_matches_determinantal_divisors(seed):
    rng = random.Random(seed)
    A = random_polymatrix(rng, 3, 3, 2)
    U, S, V = smith_normal_form(A)
    assert U @ A @ V == S
    assert U.det().degree == 0 and V.det().degree == 0
    divs = determinantal_divisors(A)
    gammas = [S[i, i] for i in range(3) if S[i, i]]
    assert len(gammas) == len(divs)
    prev = Poly([1])
    for g, dk in zip(gammas, divs):
        assert g == dk.exquo(prev).monic()
        prev = dk


# -- Smith-McMillan form -----------------------------------------------------

def test_smith_mcmillan_examples():
    s = smith_mcmillan(mat([["1/x"]]))
    assert (s.eps, s.psi) == ((Poly([1]),), (X,))
    s = smith_mcmillan(mat([["x"]]))
    assert (s.eps, s.psi) == ((X,), (Poly([1]),))
    s = smith_mcmillan(mat([["1/x", 0], [0, "x"]]))
    assert s.eps == (Poly([1]), X) and s.psi == (X, Poly([1]))


@pytest.mark.parametrize("seed", range(6))
def test_smith_mcmillan_chains(seed):
    R = random_rational_matrix(random.Random(seed), 3, 3, 2)
    s = smith_mcmillan(R)
    for a, b in zip(s.eps, s.eps[1:]):
        assert (b % a).is_zero()
    for a, b in zip(s.psi, s.psi[1:]):
        assert (a % b).is_zero()
    for e, p in zip(s.eps, s.psi):
        assert poly_gcd(e, p).degree == 0


# -- determinantal denominators ---------------------------------------------

def test_denominators_examples():
    assert determinantal_denominators(mat([["1/x", "1/x"], ["1/x", "1/x"]])) == [Poly([1]), X]
    assert determinantal_denominators(mat([["1/x", 0], [0, "1/x"]])) == [Poly([1]), X, X * X]


@pytest.mark.parametrize("seed", range(6))
def test_denominators_match_minor_enumeration(seed):
    R = random_rational_matrix(random.Random(100 + seed), 3, 4, 2)
    phis = determinantal_denominators(R)
    for k in range(1, len(phis)):
        dens = [sub.det().den for j in range(1, k + 1) for sub in minors(R, j)]
        assert phis[k] == poly_lcm(dens)
    for a, b in zip(phis, phis[1:]):
        assert (b % a).is_zero()
    for k, p in enumerate(phis):
        assert ((phis[1] ** k) % p).is_zero()


# -- McMillan degree -----------------------------------------------------------

def test_mcmillan_examples():
    assert mcmillan_degree(mat([["1/x"]])) == 1
    assert mcmillan_degree(mat([["x"]])) == 1
    assert mcmillan_degree(mat([["x + 1/x"]])) == 2


def test_mcmillan_via_mobius_examples():
    inv = Mobius(0, 1, 1, 0)
    assert mcmillan_degree_via_mobius(mat([["x"]]), mu=inv) == 1
    assert mcmillan_degree_via_mobius(mat([["1/(x-1)"]]), mu=inv) == 1


@pytest.mark.parametrize("seed", range(20))
def test_three_paths_agree(seed):
    rng = random.Random(seed)
    R = random_rational_matrix(rng, rng.randint(1, 3), rng.randint(1, 3), 2)
    d = mcmillan_degree(R)
    assert d == mcmillan_degree_via_mobius(R, rng=rng)
    assert d == mcmillan_by_poles(R)


def test_mobius_search_examples():
    mu = find_proper_mobius([mat([["x"]])])
    assert mat([["x"]]).substitute(mu).is_proper()
    assert mat([["1/(x-1)"]]).substitute(Mobius(0, 1, 1, 0)).is_proper()


def test_mobius_search_family():
    rng = random.Random(3)
    fam = [random_rational_matrix(rng, 2, 2, 2) for _ in range(3)]
    mu = find_proper_mobius(fam, rng)
    assert mu.c != 0 and mu.det != 0
    assert all(R.substitute(mu).is_proper() for R in fam)


def test_mobius_search_rejects_empty():
    with pytest.raises(ValueError):
        find_proper_mobius([])


def _rand_pair(seed, shape=(2, 2)):
    rng = random.Random(seed)
    return random_rational_matrix(rng, *shape, 2), random_rational_matrix(rng, *shape, 2)


@pytest.mark.parametrize("seed", range(10))
def test_subadditivity(seed):
    A, B = _rand_pair(seed)
    assert mcmillan_degree(A + B) <= mcmillan_degree(A) + mcmillan_degree(B)
    assert mcmillan_degree(A @ B) <= mcmillan_degree(A) + mcmillan_degree(B)


@pytest.mark.parametrize("seed", range(10))
def test_denominator_division_laws(seed):
    A, B = _rand_pair(1000 + seed)
    pa, pb = determinantal_denominators(A), determinantal_denominators(B)
    for R in (A + B, A @ B):
        ps = determinantal_denominators(R)
        for k in range(1, len(ps)):
            bound = pa[min(k, len(pa) - 1)] * pb[min(k, len(pb) - 1)]
            assert (bound % ps[k]).is_zero()


@pytest.mark.parametrize("seed", range(8))
def test_inverse_keeps_mcmillan_degree(seed):
    rng = random.Random(seed)
    while True:
        R = random_rational_matrix(rng, 2, 2, 2)
        if not R.det().is_zero():
            break
    assert mcmillan_degree(R.inverse()) == mcmillan_degree(R)


@pytest.mark.parametrize("seed", range(8))
def test_shift_invariance(seed):
    R = random_rational_matrix(random.Random(seed), 3, 3, 2)
    assert mcmillan_degree(R.shift(1)) == mcmillan_degree(R)


# -- minor degree ----------------------------------------------------------------

def test_minor_degree_examples():
    assert minor_degree(pm([[[0, 1], []], [[], [0, 0, 1]]])) == 3
    assert minor_degree(pm([[[1], []], [[], []]])) == 0
    with pytest.raises(ValueError):
        minor_degree(pm([[[]]]))


@given(st.integers(0, 10_000))
def test_minor_degree_matches_enumeration(seed):
    rng = random.Random(seed)
    A = random_polymatrix(rng, rng.randint(1, 3), rng.randint(1, 3), 3)
    if A.is_zero():
        return
    r = A.rank()
    want = max(poly_det(s.entries).degree for s in minors(A, r))
    assert minor_degree(A) == want


# -- realisations -----------------------------------------------------------------

def test_realisation_identity():
    r = Realisation(pm([[[1], []], [[], [1]]]), pm([[[0, 1], []], [[], [1]]]), pm([[[1], []], [[], [1]]]))
    assert realisation_degree_bound(r) == 1


def test_singular_realisation_rejected():
    r = Realisation(pm([[[1]]]), pm([[[]]]), pm([[[1]]]))
    with pytest.raises(ZeroDivisionError):
        realisation_degree_bound(r)


def test_resolvent_sylvester_realisation():
    P = biv("y^2 - x")
    real = resolvent_realisation(P)
    assert realisation_degree_bound(real) <= 3


@pytest.mark.parametrize("seed", range(6))
def test_realisation_bounds_denominators(seed):
    rng = random.Random(seed)
    while True:
        M = random_polymatrix(rng, 2, 2, 2)
        if not M.det().is_zero():
            break
    real = Realisation(random_polymatrix(rng, 2, 2, 1), M, random_polymatrix(rng, 2, 2, 1))
    R = real.product()
    bound = realisation_degree_bound(real)
    for phi in determinantal_denominators(R):
        assert phi.degree <= bound
    if R.is_proper():
        assert mcmillan_degree(R) <= bound
