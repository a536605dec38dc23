"""Polynomials in ``y`` with coefficients in Q(x).

Inputs such as ``P(x, y)`` have polynomial coefficients; quotients by
``P`` and Hermite reduction need the full coefficient field, so a single
dense type covers both.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import Poly, RatFunc, as_ratfunc, format_poly, poly_gcd, poly_lcm
from .parsing import ParseError, parse_expression
from .series import TruncSeries

__all__ = ["BivarPoly", "parse_bivariate"]


class BivarPoly:
    """``sum c_i(x) * y^i``; ``coeffs[i]`` is a RatFunc."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_ratfunc(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[RatFunc, ...] = tuple(cs)

    @classmethod
    def y(cls) -> "BivarPoly":
        return cls([0, 1])

    @classmethod
    def x(cls) -> "BivarPoly":
        return cls([RatFunc.x()])

    @classmethod
    def const(cls, c) -> "BivarPoly":
        return cls([c])

    @classmethod
    def from_polys(cls, polys: Sequence[Poly]) -> "BivarPoly":
        return cls(polys)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def deg_y(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def deg_x(self) -> int:
        """Largest x-degree once denominators are cleared."""
        if self.is_zero():
            return 0
        P, _ = self.clear_denominators()
        return int(max(c.num.degree for c in P.coeffs if c))

    def __getitem__(self, i: int) -> RatFunc:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else RatFunc()

    @property
    def lc(self) -> RatFunc:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs)

    def poly_coeffs(self) -> list[Poly]:
        if not self.is_polynomial():
            raise ValueError(f"{self} has non-polynomial coefficients in x")
        return [c.as_poly() for c in self.coeffs]

    def clear_denominators(self) -> tuple["BivarPoly", Poly]:
        """``(Q, g)`` with ``self = Q/g`` and ``Q`` polynomial in x and y."""
        g = poly_lcm(c.den for c in self.coeffs if c)
        return BivarPoly([c * g for c in self.coeffs]), g

    def primitive(self) -> "BivarPoly":
        """Polynomial in x and y with no factor depending on x alone,
        integer coefficients and positive leading coefficient."""
        if self.is_zero():
            return self
        Q, _ = self.clear_denominators()
        polys = [c.as_poly() for c in Q.coeffs]
        g = Poly()
        for p in polys:
            g = poly_gcd(g, p)
        polys = [p.exquo(g) if p else p for p in polys]
        den = 1
        for p in polys:
            for c in p.coeffs():
                den = math.lcm(den, c.denominator)
        ints = [[int(c * den) for c in p.coeffs()] for p in polys]
        content = math.gcd(*(c for cs in ints for c in cs))
        sign = -1 if polys[-1].lc < 0 else 1
        return BivarPoly([Poly([sign * c // content for c in cs]) for cs in ints])

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "BivarPoly | None":
        if isinstance(other, BivarPoly):
            return other
        if isinstance(other, (RatFunc, Poly, int, Fraction)):
            return BivarPoly([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return BivarPoly([self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return BivarPoly()
        out = [RatFunc() for _ in range(self.deg_y + o.deg_y + 1)]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return BivarPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero element of Q(x)."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.deg_y != 0:
            raise ValueError("can only divide by a function of x")
        inv = o.coeffs[0].inverse()
        return BivarPoly([c * inv for c in self.coeffs])

    def __pow__(self, k: int) -> "BivarPoly":
        if k < 0:
            raise ValueError("negative power")
        out = BivarPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "BivarPoly") -> tuple["BivarPoly", "BivarPoly"]:
        o = self._coerce(other)
        if o is None or o.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        r = list(self.coeffs)
        db = o.deg_y
        inv = o.lc.inverse()
        q = [RatFunc() for _ in range(max(len(r) - db, 0))]
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if not c:
                continue
            f = c * inv
            q[k - db] = f
            for j, b in enumerate(o.coeffs):
                if b:
                    r[k - db + j] = r[k - db + j] - f * b
        return BivarPoly(q), BivarPoly(r[:db])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def exquo(self, other: "BivarPoly") -> "BivarPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "BivarPoly":
        if self.is_zero():
            return self
        inv = self.lc.inverse()
        return BivarPoly([c * inv for c in self.coeffs])

    def gcd(self, other: "BivarPoly") -> "BivarPoly":
        """Monic gcd over Q(x)."""
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "BivarPoly") -> tuple["BivarPoly", "BivarPoly", "BivarPoly"]:
        """``(g, s, t)`` with ``s*self + t*other = g`` monic."""
        r0, r1 = self, other
        s0, s1 = BivarPoly([1]), BivarPoly()
        t0, t1 = BivarPoly(), BivarPoly([1])
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = r0.lc.inverse()
        return r0 * inv, s0 * inv, t0 * inv

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- calculus and evaluation ------------------------------------------
    def diff_y(self) -> "BivarPoly":
        return BivarPoly([c * i for i, c in enumerate(self.coeffs)][1:])

    def diff_x(self) -> "BivarPoly":
        return BivarPoly([c.derivative() for c in self.coeffs])

    def is_squarefree(self) -> bool:
        return self.deg_y <= 0 or self.gcd(self.diff_y()).deg_y == 0

    def squarefree_part(self) -> "BivarPoly":
        g = self.gcd(self.diff_y())
        if g.deg_y <= 0:
            return self
        return self.exquo(g)

    def eval_x(self, c) -> list[Fraction]:
        """Coefficients in y of ``P(c, y)``."""
        return [f(c) for f in self.coeffs]

    def eval_xy(self, cx, cy) -> Fraction:
        acc = Fraction(0)
        for f in reversed(self.coeffs):
            acc = acc * cy + f(cx)
        return acc

    def shift_x(self, c) -> "BivarPoly":
        return BivarPoly([f.shift(c) for f in self.coeffs])

    def subs_y(self, g: TruncSeries) -> TruncSeries:
        """``P(x, g(x))`` as a truncated series (coefficients expanded at 0)."""
        n = g.precision
        acc = TruncSeries([], n)
        for f in reversed(self.coeffs):
            acc = acc * g + TruncSeries.from_ratfunc(f, n)
        return acc

    # -- display ----------------------------------------------------------
    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.deg_y, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("y" if i == 1 else f"y^{i}")
            if c.is_polynomial():
                cs = c.num.coeffs()
                nz = [k for k, v in enumerate(cs) if v]
                body = format_poly(cs, "x")
                single = len(nz) == 1
            else:
                body = f"({c.num})/({c.den})"
                single = False
            if not mono:
                parts.append(body if single else f"({body})")
                continue
            if body == "1":
                parts.append(mono)
            elif body == "-1":
                parts.append(f"-{mono}")
            elif single:
                parts.append(f"{body}*{mono}")
            else:
                parts.append(f"({body})*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"BivarPoly({self})"


def parse_bivariate(text: str) -> BivarPoly:
    """Parse ``y^2 - x*y + 3``; rational functions of x are allowed."""
    try:
        return parse_expression(text, {"x": BivarPoly.x(), "y": BivarPoly.y()}, BivarPoly.const)
    except ParseError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), 0) from None
