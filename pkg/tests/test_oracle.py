import dataclasses
import math
import random
from fractions import Fraction

import pytest

from orekrylov.algebra import Poly
from orekrylov.instances import compose_annihilator, differential_resolvent, lclm, symmetric_product, telescoper
from orekrylov.oracle import (OracleError, brute_force_relation, compose_series, find_simple_root,
                              mcmillan_by_poles, newton_algebraic_series, sequence_solution,
                              series_solution_basis, verify_instance, verify_telescoper)
from orekrylov.ore import DX, SX, ore_apply
from orekrylov.pseudokrylov import KrylovSeed, PseudoLinearMap
from orekrylov.randgen import random_operator, random_with_root
from orekrylov.series import TruncSeries

from conftest import biv, mat, op


# -- series and sequences ------------------------------------------------------

def test_exponential_series():
    (s,) = series_solution_basis(op("Dx - 1"), 6).series
    assert s.coeffs == [Fraction(1, math.factorial(n)) for n in range(6)]


def test_second_derivative_basis():
    a, b = series_solution_basis(op("Dx^2"), 4).series
    assert a.coeffs == [1, 0, 0, 0] and b.coeffs == [0, 1, 0, 0]


def test_series_basis_moves_off_singular_point():
    basis = series_solution_basis(op("x*Dx - 1"), 5)
    assert basis.point == 1
    with pytest.raises(OracleError):
        series_solution_basis(op("x*Dx - 1"), 5, point=0)


@pytest.mark.parametrize("i", range(5))
def test_series_basis_random(i):
    L = random_operator(random.Random(i), DX, 2, 2)
    basis = series_solution_basis(L, 20)
    Lc = L.translate(basis.point)
    for s in basis.series:
        out = ore_apply(Lc, s)
        assert out.is_zero() and out.precision >= 20 - 2


def test_sequences():
    assert sequence_solution(op("Sx - (x+1)", SX), [1], 5).values == (1, 1, 2, 6, 24)
    assert sequence_solution(op("Sx - 1", SX), [7], 4).values == (7, 7, 7, 7)


def test_sequence_rejects_vanishing_leading_coefficient():
    with pytest.raises(OracleError):
        sequence_solution(op("x*Sx - 1", SX), [1], 4)


@pytest.mark.parametrize("i", range(5))
def test_sequence_random_resubstitution(i):
    rng = random.Random(50 + i)
    L = random_operator(rng, SX, 2, 1)
    L = op("(x^2 + 1)*Sx^2", SX) + L  # keep the leading coefficient away from zero
    u = sequence_solution(L, [rng.randint(-3, 3), rng.randint(-3, 3)], 12)
    assert ore_apply(L, u).is_zero()


# -- algebraic roots -------------------------------------------------------------

def test_newton_binomial_series():
    g = newton_algebraic_series(biv("y^2 - (1 + x)"), 1, 4)
    assert g.coeffs == [1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)]


def test_newton_polynomial_root():
    g = newton_algebraic_series(biv("y - x^2"), 0, 5)
    assert g.coeffs == [0, 0, 1, 0, 0] and g.precision == 5


def test_newton_needs_simple_root():
    with pytest.raises(OracleError):
        newton_algebraic_series(biv("y^2 - x"), 0, 4)
    with pytest.raises(OracleError):
        newton_algebraic_series(biv("y^2 - x"), 1, 4)


@pytest.mark.parametrize("i", range(5))
def test_newton_random_residual(i):
    P = random_with_root(random.Random(100 + i), 2, 3)
    c, y0 = find_simple_root(P)
    g = newton_algebraic_series(P, y0, 30, point=c)
    assert P.shift_x(c).subs_y(g).is_zero()


def test_compose_series_exp_of_square():
    # e^(x^2) = 1 + x^2 + x^4/2 + ...
    (f,) = series_solution_basis(op("Dx - 1"), 8, point=0).series
    h = compose_series(f, TruncSeries([0, 0, 1], 8))
    assert h.coeffs[:6] == [1, 0, 1, 0, Fraction(1, 2), 0]


# -- brute-force relations -----------------------------------------------------

def test_brute_force_examples():
    rel = brute_force_relation(PseudoLinearMap(DX, mat([[0]])), KrylovSeed((Poly([1]),)))
    assert rel.order == 1 and rel.eta == (Poly(), Poly([1]))
    rel = brute_force_relation(PseudoLinearMap(SX, mat([[1]])), KrylovSeed((Poly([1]),)))
    assert rel.order == 1 and rel.eta in ((Poly([1]), Poly([-1])), (Poly([-1]), Poly([1])))


# -- telescoper certificates ----------------------------------------------------

def test_verify_telescoper_examples():
    cert = verify_telescoper(op("Dx"), biv("1"), biv("x - y"))
    assert cert.ok
    num, den = cert.certificate()
    # h = -1/(x - y)
    assert num * biv("x - y") == -den
    assert verify_telescoper(op("x*Dx + 1"), biv("1"), biv("x^2 + y^2")).ok
    assert not verify_telescoper(op("Dx"), biv("1"), biv("x^2 + y^2")).ok


def test_verify_telescoper_rejects_shift():
    with pytest.raises(OracleError):
        verify_telescoper(op("Sx", SX), biv("1"), biv("x - y"))


# -- negative end-to-end checks -------------------------------------------------------

def _tampered(rep, text):
    return dataclasses.replace(rep, operator=op(text, rep.operator.kind))


def test_verify_instance_detects_wrong_operators():
    assert not verify_instance(_tampered(lclm([op("Dx - 1"), op("Dx")]), "Dx^2 + Dx")).ok
    assert not verify_instance(_tampered(symmetric_product([op("Dx - 1"), op("Dx - 1")]), "Dx - 1")).ok
    assert not verify_instance(_tampered(differential_resolvent(biv("y^2 - x")), "2*x*Dx + 1")).ok
    rep = compose_annihilator(biv("y^2 - x"), op("Dx - 1"))
    assert not verify_instance(_tampered(rep, "4*x*Dx^2 + 2*Dx + 1")).ok
    assert not verify_instance(_tampered(telescoper(biv("1"), biv("x^2 + y^2")), "x*Dx - 1")).ok


def test_verify_instance_shift_sequences():
    rep = symmetric_product([op("Sx - 2", SX), op("(x+1)*Sx - 1", SX)])
    assert verify_instance(rep).ok
    assert not verify_instance(_tampered(rep, "(x+1)*Sx - 3")).ok


# -- pole enumeration ----------------------------------------------------------------

def test_poles_examples():
    assert mcmillan_by_poles(mat([["1/x"]])) == 1
    assert mcmillan_by_poles(mat([["x + 1/x"]])) == 2
    assert mcmillan_by_poles(mat([["1/x", 0], [0, "x"]])) == 2
    assert mcmillan_by_poles(mat([["1/x", "1/x"], ["1/x", "1/x"]])) == 1
