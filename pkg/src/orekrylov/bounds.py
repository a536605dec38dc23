"""Closed-form degree bounds and order-degree curves.

Every bound is evaluated exactly over Q and floored only at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "FAMILIES",
    "BoundQuery",
    "BoundError",
    "exact_bound",
    "evaluate_bound",
    "order_degree_curve",
    "degmm_bound",
    "table1_row",
]


class BoundError(ValueError):
    pass


_REQUIRED = {
    "Generic": ("rho", "d_a", "degmm_T"),
    "LCLM": ("rho", "s", "d"),
    "SymProd": ("rho", "r_i", "d_i"),
    "Polynomials": ("rho", "deg_x_J", "k_i", "r_i", "d_i"),
    "AlgeqToDiffeq": ("rho", "r", "d"),
    "Composition": ("rho", "d_P", "r_P", "d_L", "r_L"),
    "Hermite": ("rho", "r", "d"),
    "SymPower": ("r", "d", "ell"),
    "Associate": ("r", "d", "d_A"),
    "Wronskian": ("r", "d"),
}

FAMILIES = tuple(_REQUIRED)


@dataclass(frozen=True)
class BoundQuery:
    family: str
    params: Mapping[str, object] = field(default_factory=dict)
    m: int | None = None

    def __post_init__(self):
        if self.family not in _REQUIRED:
            raise BoundError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        missing = [k for k in _REQUIRED[self.family] if k not in self.params]
        if missing:
            raise BoundError(f"{self.family} bound needs {', '.join(missing)}")

    def with_order(self, m: int) -> "BoundQuery":
        return BoundQuery(self.family, self.params, m)


def _ints(v) -> list[int]:
    return [int(t) for t in v]


def _symprod_degmm(r_i, d_i) -> Fraction:
    r_i, d_i = _ints(r_i), _ints(d_i)
    total = 0
    for i, d in enumerate(d_i):
        total += d * math.prod(r for j, r in enumerate(r_i) if j != i)
    return Fraction(total)


def _closure_R(k_i, r_i) -> int:
    return math.prod(math.comb(k + r - 1, k) for k, r in zip(_ints(k_i), _ints(r_i)))


def _closure_degmm(k_i, r_i, d_i, shift: bool = False) -> Fraction:
    """``R * sum k d / (k + r - 1)``.  With shifts every factor of a basis
    product moves at once, so each factor sitting at ``r - 1`` contributes
    a denominator and the weight becomes ``k / r``."""
    R = _closure_R(k_i, r_i)
    total = Fraction(0)
    for k, r, d in zip(_ints(k_i), _ints(r_i), _ints(d_i)):
        if k:
            total += Fraction(k * d, r if shift else k + r - 1)
    return R * total


def degmm_bound(family: str, params: Mapping[str, object]) -> Fraction:
    """Closed-form upper bound on degMM(T) for an instance family."""
    p = params
    if family == "LCLM":
        return Fraction(int(p["s"]) * int(p["d"]))
    if family == "SymProd":
        return _symprod_degmm(p["r_i"], p["d_i"])
    if family == "Polynomials":
        return _closure_degmm(p["k_i"], p["r_i"], p["d_i"], bool(p.get("shift", 0)))
    if family == "AlgeqToDiffeq":
        return Fraction((2 * int(p["r"]) - 1) * int(p["d"]))
    if family == "Composition":
        # e_lc = deg_x of the leading y-coefficient of P; reducing a*P_x mod P
        # divides by it, so each of the r_L blocks can gain that many poles
        d_P, r_P, d_L, r_L = (int(p[k]) for k in ("d_P", "r_P", "d_L", "r_L"))
        return Fraction(r_L * ((2 * r_P - 1) * d_P + int(p.get("e_lc", 0))) + d_L * d_P)
    if family == "Hermite":
        return Fraction(2 * int(p["r"]) * int(p["d"]))
    if family == "Generic":
        return Fraction(int(p["degmm_T"]))
    raise BoundError(f"no McMillan-degree formula for family {family!r}")


def exact_bound(q: BoundQuery) -> Fraction:
    """The rational value of the bound before flooring."""
    p = q.params
    fam = q.family
    if fam == "SymPower":
        r, d, ell = int(p["r"]), int(p["d"]), int(p["ell"])
        cap = math.comb(ell + r - 1, ell)
        return Fraction(cap * cap * ell * d, ell + r - 1)
    if fam == "Associate":
        return Fraction(int(p["r"]) * (int(p["d_A"]) + int(p["d"])))
    if fam == "Wronskian":
        r = int(p["r"])
        return Fraction(r ** (2 * r) * int(p["d"]))

    rho = int(p["rho"])
    m = rho if q.m is None else int(q.m)
    if m < rho:
        raise BoundError(f"order {m} is below the minimal order {rho}")
    gap = m - rho + 1
    if fam == "Generic":
        return Fraction(rho * int(p["d_a"]) + m * int(p["degmm_T"]), gap)
    if fam == "Polynomials":
        return (rho * int(p["deg_x_J"]) + m * degmm_bound(fam, p)) / gap
    if fam == "Hermite":
        r, d = int(p["r"]), int(p["d"])
        return Fraction(rho * d + 2 * m * r * d, gap)
    # the remaining families have d_a = 0 and read m * degMM(T) / (m - rho + 1)
    return m * degmm_bound(fam, p) / gap


def evaluate_bound(q: BoundQuery) -> int:
    return math.floor(exact_bound(q))


def order_degree_curve(q: BoundQuery, m_range: Iterable[int]) -> list[tuple[int, int]]:
    return [(m, evaluate_bound(q.with_order(m))) for m in m_range]


_TABLE1 = {
    "LCLM": ("sr", "sd", "s^2rd + o(s^2rd)"),
    "SymProd": ("r^s", "sr^(s-1)d", "sr^(2s-1)d + o(sr^(2s-1)d)"),
    "AlgeqToDiffeq": ("r", "(2r-1)d", "2r^2d + o(r^2d)"),
    "Composition": ("r^2", "(r(2r-1)+d)d", "O(r^2d^2 + r^4d)"),
    "Hermite": ("r", "2rd", "2r^2d + o(r^2d)"),
}


def table1_row(family: str, params: Mapping[str, object] | None = None) -> tuple[str, str, str]:
    """Symbolic (order cap, degMM(T), leading term of the bound).

    For the composition row ``r`` and ``d`` stand for a common bound on
    the orders and degrees of ``P`` and ``L``.
    """
    try:
        return _TABLE1[family]
    except KeyError:
        raise BoundError(f"family {family!r} has no table row") from None
