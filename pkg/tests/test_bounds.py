import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orekrylov.bounds import (BoundError, BoundQuery, degmm_bound, evaluate_bound, exact_bound,
                              order_degree_curve, table1_row)


def test_lclm_bound():
    # s * rho * d
    assert evaluate_bound(BoundQuery("LCLM", {"s": 2, "rho": 4, "d": 2})) == 16


def test_generic_bound_at_minimal_order():
    # rho * d_a + rho * degMM(T)
    assert evaluate_bound(BoundQuery("Generic", {"rho": 3, "d_a": 0, "degmm_T": 5}, 3)) == 15


def test_resolvent_bound():
    # rho * (2r - 1) * d
    assert evaluate_bound(BoundQuery("AlgeqToDiffeq", {"r": 3, "d": 2, "rho": 3}, 3)) == 30


def test_generic_curve():
    q = BoundQuery("Generic", {"rho": 2, "d_a": 0, "degmm_T": 4})
    assert order_degree_curve(q, range(2, 5)) == [(2, 8), (3, 6), (4, 5)]
    assert exact_bound(q.with_order(4)) == Fraction(16, 3)


def test_other_families():
    assert evaluate_bound(BoundQuery("SymProd", {"rho": 4, "r_i": [2, 2], "d_i": [1, 3]})) == 4 * (2 + 6)
    assert evaluate_bound(BoundQuery("Hermite", {"rho": 2, "r": 2, "d": 3})) == 2 * (3 + 12)
    assert evaluate_bound(BoundQuery("Composition",
                                     {"rho": 2, "d_P": 1, "r_P": 2, "d_L": 1, "r_L": 1})) == 2 * 1 * (3 + 1)
    # R = 1, degMM = 1 * 2 * 1/(2 + 1 - 1) = 1
    q = BoundQuery("Polynomials", {"rho": 1, "deg_x_J": 0, "k_i": [2], "r_i": [1], "d_i": [1]})
    assert evaluate_bound(q) == 1


def test_corollary_families():
    # (C(ell+r-1, ell))^2 * ell d / (ell + r - 1)
    assert evaluate_bound(BoundQuery("SymPower", {"r": 2, "d": 1, "ell": 2})) == math.floor(Fraction(9 * 2, 3))
    assert evaluate_bound(BoundQuery("Associate", {"r": 3, "d": 1, "d_A": 2})) == 9
    assert evaluate_bound(BoundQuery("Wronskian", {"r": 2, "d": 1})) == 16


def test_shift_closure_degmm():
    p = {"k_i": [2], "r_i": [1], "d_i": [1]}
    assert degmm_bound("Polynomials", p) == 1
    assert degmm_bound("Polynomials", dict(p, shift=1)) == 2


def test_composition_leading_coefficient_term():
    p = {"d_P": 2, "r_P": 1, "d_L": 1, "r_L": 1}
    assert degmm_bound("Composition", p) == 4
    assert degmm_bound("Composition", dict(p, e_lc=2)) == 6


def test_degmm_examples():
    assert degmm_bound("LCLM", {"s": 2, "d": 3}) == 3 + 3
    assert degmm_bound("AlgeqToDiffeq", {"r": 3, "d": 2}) == (2 * 3 - 1) * 2
    assert degmm_bound("Hermite", {"r": 2, "d": 2}) == 8


def test_errors():
    with pytest.raises(BoundError):
        BoundQuery("LCLM", {"s": 2, "d": 2})
    with pytest.raises(BoundError):
        BoundQuery("Nope", {})
    with pytest.raises(BoundError):
        evaluate_bound(BoundQuery("LCLM", {"s": 2, "rho": 4, "d": 2}, 3))
    with pytest.raises(BoundError):
        table1_row("Polynomials")


def test_table_rows():
    assert table1_row("AlgeqToDiffeq")[:2] == ("r", "(2r-1)d")
    assert table1_row("AlgeqToDiffeq")[2].startswith("2r^2d")
    assert table1_row("Hermite")[:2] == ("r", "2rd")
    assert table1_row("LCLM")[2].startswith("s^2rd")
    assert table1_row("SymProd")[:2] == ("r^s", "sr^(s-1)d")


def test_minimal_order_matches_curve_start():
    for fam, p in [("LCLM", {"s": 3, "rho": 5, "d": 2}), ("Hermite", {"rho": 2, "r": 2, "d": 3}),
                   ("AlgeqToDiffeq", {"rho": 3, "r": 3, "d": 2})]:
        q = BoundQuery(fam, p)
        assert order_degree_curve(q, [p["rho"]])[0][1] == evaluate_bound(q)


def test_lclm_curve_non_increasing():
    vals = [b for _, b in order_degree_curve(BoundQuery("LCLM", {"s": 2, "rho": 4, "d": 2}), range(4, 9))]
    assert vals == sorted(vals, reverse=True)


params = st.fixed_dictionaries({"rho": st.integers(1, 8), "d_a": st.integers(0, 6), "degmm_T": st.integers(0, 12)})


@given(params, st.integers(0, 10))
def test_generic_curve_monotone_and_floored(p, k):
    q = BoundQuery("Generic", p)
    m = p["rho"] + k
    a, b = exact_bound(q.with_order(m)), exact_bound(q.with_order(m + 1))
    assert b <= a
    v = evaluate_bound(q.with_order(m))
    assert 0 <= a - v < 1 and isinstance(v, int)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 4), st.integers(0, 6))
def test_hermite_curve_monotone(r, d, rho_gap, k):
    rho = max(1, r - rho_gap)
    q = BoundQuery("Hermite", {"rho": rho, "r": r, "d": d})
    assert exact_bound(q.with_order(rho + k + 1)) <= exact_bound(q.with_order(rho + k))
