import random
import warnings

import pytest

from orekrylov.bivariate import BivarPoly
from orekrylov.bounds import BoundQuery, evaluate_bound
from orekrylov.closure import ClosurePoly, parse_closure
from orekrylov.instances import (InstanceError, associate, compose_annihilator, differential_resolvent,
                                 hermite_reduce, instance_degmm_report, lclm, polynomial_closure,
                                 resolvent_realisation, sym_power, symmetric_product, telescoper,
                                 telescoper_realisation, wronskian_annihilator)
from orekrylov.oracle import verify_instance, verify_telescoper
from orekrylov.ore import DX, SX, OrePoly, ore_right_divrem
from orekrylov.randgen import (random_homogeneous_J, random_operator, random_squarefree, random_telescoper_input,
                               random_with_root)
from orekrylov.ratmat import realisation_degree_bound

from conftest import biv, op


def proportional(A: OrePoly, B: OrePoly) -> bool:
    return A.normalized() == B.normalized()


# -- LCLM --------------------------------------------------------------------

def test_lclm_examples():
    assert lclm([op("Dx - 1"), op("Dx")]).operator == op("Dx^2 - Dx")
    assert lclm([op("Dx - 1"), op("Dx - 1")]).operator == op("Dx - 1")


def test_lclm_rejects_bad_input():
    with pytest.raises(InstanceError):
        lclm([])
    with pytest.raises(InstanceError):
        lclm([op("Dx"), op("Sx", SX)])


@pytest.mark.parametrize("i", range(6))
def test_lclm_random_right_divisible(i):
    rng = random.Random(i)
    kind = DX if i % 2 else SX
    Ls = [random_operator(rng, kind, 2, 2) for _ in range(2)]
    rep = lclm(Ls)
    for L in Ls:
        assert ore_right_divrem(rep.operator, L)[1].is_zero()
    assert rep.order <= 4
    assert rep.degree <= 2 * rep.order * 2 == rep.bound


# -- symmetric products ------------------------------------------------------

def test_symmetric_product_examples():
    assert symmetric_product([op("Dx - 1"), op("Dx - 1")]).operator == op("Dx - 2")
    assert symmetric_product([op("Dx - 1"), op("Dx")]).operator == op("Dx - 1")


def test_symmetric_product_shift_example():
    # 2^n * 3^n = 6^n
    rep = symmetric_product([op("Sx - 2", SX), op("Sx - 3", SX)])
    assert rep.operator == op("Sx - 6", SX)


@pytest.mark.parametrize("i", range(6))
def test_symmetric_product_random(i):
    rng = random.Random(100 + i)
    kind = DX if i % 2 else SX
    Ls = [random_operator(rng, kind, 2, rng.randint(0, 2)) for _ in range(2)]
    rep = symmetric_product(Ls)
    assert rep.order <= 4
    d1, d2 = (L.degree for L in rep.inputs["Ls"])
    assert rep.degree <= rep.order * (d1 * 2 + d2 * 2)
    assert verify_instance(rep, precision=50).ok


# -- polynomial closures -------------------------------------------------------

def test_closure_matches_symmetric_product():
    Ls = [op("Dx - 1"), op("x*Dx^2 + 1")]
    a = polynomial_closure(parse_closure("y1_0*y2_0"), Ls).operator
    assert a == symmetric_product(Ls).operator


def test_closure_square_of_exponential():
    assert polynomial_closure(parse_closure("y1_0^2"), [op("Dx - 1")]).operator == op("Dx - 2")


def test_closure_wronskian_of_constants_and_lines():
    rep = wronskian_annihilator([op("Dx^2"), op("Dx^2")])
    assert rep.operator == op("Dx")
    assert verify_instance(rep).ok


def test_closure_rejects_zero():
    with pytest.raises(InstanceError):
        polynomial_closure(ClosurePoly(), [op("Dx")])
    # y1_1 - y1_0 vanishes modulo Dx - 1
    with pytest.raises(InstanceError):
        polynomial_closure(parse_closure("y1_1 - y1_0"), [op("Dx - 1")])


def test_closure_non_homogeneous_goes_through_lclm():
    rep = polynomial_closure(parse_closure("y1_0^2 + y1_0"), [op("Dx - 1")])
    assert rep.operator == op("Dx^2 - 3*Dx + 2")
    assert len(rep.parts) == 2


@pytest.mark.parametrize("i", range(8))
def test_closure_random_homogeneous(i):
    rng = random.Random(200 + i)
    kind = DX if i % 2 else SX
    Ls = [random_operator(rng, kind, rng.randint(1, 2), rng.randint(0, 2)) for _ in range(rng.choice([1, 2]))]
    J = random_homogeneous_J(rng, [L.order for L in Ls])
    rep = polynomial_closure(J, Ls)
    assert rep.order <= rep.params["R"]
    assert rep.degree <= rep.bound
    assert verify_instance(rep, rng=rng).ok
    actual, bound = instance_degmm_report(rep)
    assert actual <= bound


def test_shift_closure_needs_shift_degmm():
    # (y(x))^2 for (2x-2) y(x+1) = (x-5) y(x): every factor of the square
    # moves at once, so the differential count of degMM(T) is too small
    L = op("(2*x-2)*Sx + (5-x)", SX)
    rep = polynomial_closure(parse_closure("y1_0^2"), [L])
    assert rep.operator == op("(2*x-2)^2*Sx - (x-5)^2", SX)
    assert verify_instance(rep).ok
    assert rep.degmm_T == 2
    assert instance_degmm_report(rep) == (2, 2)
    differential = {k: v for k, v in rep.params.items() if k != "shift"}
    assert evaluate_bound(BoundQuery("Polynomials", differential)) == 1 < rep.degree
    assert rep.degree <= rep.bound


# -- corollary wrappers -------------------------------------------------------

@pytest.mark.parametrize("ell", range(1, 6))
def test_sym_power_of_exponential(ell):
    assert sym_power(op("Dx - 1"), ell).operator == op(f"Dx - {ell}")


def test_sym_power_rejects_zero_power():
    with pytest.raises(InstanceError):
        sym_power(op("Dx - 1"), 0)


def test_associate_airy():
    rep = associate(op("Dx^2 - x"), op("Dx"))
    assert rep.order == 2
    assert rep.operator == op("x*Dx^2 - Dx - x^2")
    assert rep.family == "Associate" and rep.degree <= rep.bound
    assert verify_instance(rep).ok


def test_associate_preconditions():
    with pytest.raises(InstanceError):
        associate(op("Dx - 1"), op("Dx"))
    with pytest.raises(InstanceError):
        associate(op("Dx^2"), op("Sx", SX))


def test_wronskian_of_equal_first_order():
    rep = wronskian_annihilator([op("Dx - 1"), op("Dx - 1")])
    assert rep.order <= 1


def test_wronskian_needs_common_order():
    with pytest.raises(InstanceError):
        wronskian_annihilator([op("Dx"), op("Dx^2")])


# -- differential resolvent ---------------------------------------------------

def test_resolvent_examples():
    assert differential_resolvent(biv("y^2 - x")).operator == op("2*x*Dx - 1")
    assert differential_resolvent(biv("y - x^2")).operator == op("x*Dx - 2")


def test_resolvent_takes_squarefree_part():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        rep = differential_resolvent(biv("(y^2 - x)^2"))
    assert w and rep.operator == op("2*x*Dx - 1")


def test_resolvent_rejects_constant_in_y():
    with pytest.raises(InstanceError):
        differential_resolvent(biv("x^2 + 1"))


@pytest.mark.parametrize("i", range(5))
def test_resolvent_random(i):
    rng = random.Random(300 + i)
    P = random_with_root(rng, 2, 3)
    rep = differential_resolvent(P)
    r, d = rep.params["r"], rep.params["d"]
    assert rep.order <= r
    assert rep.degree <= rep.order * (2 * r - 1) * d
    assert verify_instance(rep, precision=60).ok


def test_resolvent_single_rational_root():
    # the root x/(x+1) is not a polynomial; the operator has degree 2,
    # above the closed form 1*(2*1-1)*1 for a polynomial seed
    rep = differential_resolvent(biv("(x+1)*y - x"))
    assert rep.operator == op("(x^2 + x)*Dx - 1")
    literal = evaluate_bound(BoundQuery("AlgeqToDiffeq", rep.params))
    assert literal == 1 < rep.degree <= rep.bound == 2
    assert verify_instance(rep).ok


@pytest.mark.parametrize("i", range(4))
def test_resolvent_realisation(i):
    rng = random.Random(350 + i)
    P = random_squarefree(rng, rng.randint(1, 3), rng.randint(2, 3))
    rep = differential_resolvent(P)
    real = resolvent_realisation(P)
    assert real.product() == rep.theta.T
    r, d = P.deg_y, P.deg_x
    assert real.M.det().degree <= (2 * r - 1) * d
    assert realisation_degree_bound(real) <= (2 * r - 1) * d


# -- composition ---------------------------------------------------------------

def test_compose_identity_substitution():
    L = op("Dx^2 + x")
    rep = compose_annihilator(biv("y - x"), L)
    assert rep.order == L.order
    assert rep.operator == L.normalized()


def test_compose_square_root():
    rep = compose_annihilator(biv("y^2 - x"), op("Dx - 1"))
    assert proportional(rep.operator, op("4*x*Dx^2 + 2*Dx - 1"))
    v = verify_instance(rep)
    assert v.ok and "2 branch" in v.detail


def test_compose_rejects_common_factor():
    # l(y) = y vanishes on the root y = 0 of y*(y - x)
    with pytest.raises(InstanceError):
        compose_annihilator(biv("y^2 - x*y"), op("x*Dx + 1"))
    with pytest.raises(InstanceError):
        compose_annihilator(biv("y^2 - x"), op("Sx - 1", SX))


def test_compose_rejects_non_squarefree():
    with pytest.raises(InstanceError):
        compose_annihilator(biv("(y - x)^2"), op("Dx - 1"))


@pytest.mark.parametrize("i", range(3))
def test_compose_random(i):
    rng = random.Random(400 + i)
    while True:
        P = random_with_root(rng, 2, 2)
        L = random_operator(rng, DX, 2, 1)
        try:
            rep = compose_annihilator(P, L)
            break
        except InstanceError:
            continue
    assert rep.order <= 4
    assert rep.degree <= rep.bound
    assert verify_instance(rep, precision=60).ok
    actual, bound = instance_degmm_report(rep)
    assert actual <= bound


def test_compose_non_monic_counterexample():
    # lc_y(P) = 4x^2 - x - 5 enters T through the reduction of a*P_x mod P
    P = biv("(4*x^2 - x - 5)*y + (-5*x^2 + 4*x + 10)")
    rep = compose_annihilator(P, op("(5*x+2)*Dx + (4*x+1)"))
    assert rep.order == 1 and rep.degree == 6
    literal = {k: v for k, v in rep.params.items() if k != "e_lc"}
    assert evaluate_bound(BoundQuery("Composition", literal)) == 4 < rep.degree
    assert rep.degree <= rep.bound == 6
    assert instance_degmm_report(rep) == (6, 6)
    assert verify_instance(rep).ok


# -- Hermite reduction --------------------------------------------------------

def test_hermite_examples():
    h = hermite_reduce(biv("1"), biv("x - y"), 1)
    assert h.r == biv("1") and h.cert_num.is_zero()
    h = hermite_reduce(biv("1"), biv("x - y"), 2)
    assert h.r.is_zero()
    num, den = h.certificate()
    assert (num, den) == (biv("1"), biv("x - y"))
    h = hermite_reduce(biv("y"), biv("y^2 - x"), 2)
    assert h.r.is_zero()
    assert h.certificate() == (biv("-1/2"), biv("y^2 - x"))


def _holds(num, q, k, h):
    # num/q^k == d/dy(A/q^c) + r/q, multiplied through by q^(c+1) q^k
    A, c = h.cert_num, h.cert_pow
    lhs = num * q ** (c + 1)
    rhs = (A.diff_y() * q - A * q.diff_y() * c + h.r * q ** c) * q ** k
    return lhs == rhs


@pytest.mark.parametrize("i", range(8))
def test_hermite_identity_and_uniqueness(i):
    rng = random.Random(500 + i)
    q = random_squarefree(rng, rng.randint(1, 2), rng.randint(1, 3))
    k = rng.randint(1, 3)
    r = q.deg_y
    num = BivarPoly([rng.randint(-3, 3) for _ in range(k * r)])
    h = hermite_reduce(num, q, k)
    assert h.r.deg_y < r
    assert _holds(num, q, k, h)
    if k >= 2:
        # adding a y-derivative leaves the remainder unchanged
        G = BivarPoly([rng.randint(-3, 3) for _ in range((k - 1) * r)])
        extra = G.diff_y() * q - G * q.diff_y() * (k - 1)
        assert hermite_reduce(num + extra, q, k).r == h.r


def test_hermite_preconditions():
    with pytest.raises(InstanceError):
        hermite_reduce(biv("1"), biv("(y - x)^2"), 3)
    with pytest.raises(InstanceError):
        hermite_reduce(biv("1"), biv("y - x"), 0)
    with pytest.raises(InstanceError):
        hermite_reduce(biv("y^2"), biv("y - x"), 1)


# -- telescopers ----------------------------------------------------------------

@pytest.mark.parametrize("q, want", [("x - y", "Dx"), ("x^2 + y^2", "x*Dx + 1"), ("y^2 - x", "2*x*Dx + 1")])
def test_telescoper_examples(q, want):
    rep = telescoper(biv("1"), biv(q))
    assert rep.operator == op(want)
    assert verify_telescoper(rep.operator, biv("1"), biv(q)).ok
    assert rep.inputs["certificate"].r.is_zero()


def test_telescoper_preconditions():
    with pytest.raises(InstanceError):
        telescoper(biv("y"), biv("y - x"))
    with pytest.raises(InstanceError):
        telescoper(biv("x^2"), biv("y - x"))
    with pytest.raises(InstanceError):
        telescoper(biv("1"), biv("(y - x)^2"))
    with pytest.raises(InstanceError):
        telescoper(biv("0"), biv("y - x"))


@pytest.mark.parametrize("i", range(5))
def test_telescoper_random(i):
    rng = random.Random(600 + i)
    p, q = random_telescoper_input(rng, rng.randint(1, 2), rng.randint(1, 3))
    rep = telescoper(p, q)
    r, d = q.deg_y, q.deg_x
    assert rep.order <= r
    assert rep.degree <= rep.order * (d + 2 * r * d)
    assert verify_telescoper(rep.operator, p, q).ok


@pytest.mark.parametrize("i", range(4))
def test_telescoper_realisation(i):
    rng = random.Random(650 + i)
    p, q = random_telescoper_input(rng, rng.randint(1, 2), rng.randint(1, 3))
    rep = telescoper(p, q)
    real = telescoper_realisation(q)
    assert real.product() == rep.theta.T
    assert real.M.det().degree <= 2 * q.deg_y * q.deg_x


# -- McMillan degree of T against the per-family formulas ---------------------------

def test_degmm_report_lclm():
    rep = lclm([op("(x^2+1)*Dx - x"), op("x*Dx^2 + (x^2-1)")])
    actual, bound = instance_degmm_report(rep)
    assert actual <= bound == 2 + 2


def test_degmm_report_resolvent():
    P = biv("(x^2+1)*y^3 - x*y + x^2")
    actual, bound = instance_degmm_report(differential_resolvent(P))
    assert actual <= bound == (2 * 3 - 1) * 2


def test_degmm_report_needs_map():
    rep = wronskian_annihilator([op("Dx - 1"), op("Dx - 1")])
    with pytest.raises(InstanceError):
        instance_degmm_report(rep)
