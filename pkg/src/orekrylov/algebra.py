"""Exact arithmetic over Q, Q[x] and Q(x).

Polynomials are dense and backed by FLINT's ``fmpq_poly``; the wrapper
classes keep the public surface small and give the zero polynomial a
degree of ``-inf`` so it can never be confused with a constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from flint import fmpq, fmpq_poly

Rat = Fraction

#: degree of the zero polynomial
NEG_INF = -math.inf

Scalar = Union[int, Fraction]


def to_fmpq(c: Scalar) -> fmpq:
    if isinstance(c, fmpq):
        return c
    c = Fraction(c)
    return fmpq(c.numerator, c.denominator)


def from_fmpq(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class Poly:
    """A univariate polynomial in ``x`` with rational coefficients."""

    __slots__ = ("_p",)

    def __init__(self, coeffs: Iterable[Scalar] | fmpq_poly = ()):
        if isinstance(coeffs, fmpq_poly):
            self._p = coeffs
        else:
            self._p = fmpq_poly([to_fmpq(c) for c in coeffs])

    @classmethod
    def _wrap(cls, p: fmpq_poly) -> "Poly":
        obj = cls.__new__(cls)
        obj._p = p
        return obj

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "Poly":
        return cls([0] * k + [c])

    # -- inspection -------------------------------------------------------
    @property
    def degree(self) -> float | int:
        d = self._p.degree()
        return NEG_INF if d < 0 else d

    def coeffs(self) -> list[Fraction]:
        return [from_fmpq(c) for c in self._p.coeffs()]

    def __getitem__(self, k: int) -> Fraction:
        if k < 0 or k > self._p.degree():
            return Fraction(0)
        return from_fmpq(self._p[k])

    @property
    def lc(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return from_fmpq(self._p.leading_coefficient())

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.degree() <= 0

    def __bool__(self) -> bool:
        return not self._p.is_zero()

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> fmpq_poly | None:
        if isinstance(other, Poly):
            return other._p
        if isinstance(other, (int, Fraction)):
            return fmpq_poly([to_fmpq(other)])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly._wrap(self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly._wrap(self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly._wrap(o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly._wrap(self._p * o)

    __rmul__ = __mul__

    def __neg__(self) -> "Poly":
        return Poly._wrap(-self._p)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        return Poly._wrap(self._p ** k)

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = divmod(self._p, o)
        return Poly._wrap(q), Poly._wrap(r)

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exquo(self, other: "Poly") -> "Poly":
        """Exact quotient; raises if ``other`` does not divide ``self``."""
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._p == o

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs()))

    def __call__(self, v):
        """Evaluate at a rational number or compose with a polynomial."""
        if isinstance(v, Poly):
            return Poly._wrap(self._p(v._p))
        return from_fmpq(self._p(to_fmpq(v)))

    # -- algebra ----------------------------------------------------------
    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return Poly._wrap(self._p / self._p.leading_coefficient())

    def gcd(self, other: "Poly") -> "Poly":
        return poly_gcd(self, other)

    def lcm(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly()
        g = self._p.gcd(other._p)
        return Poly._wrap(self._p * other._p / g).monic()

    def xgcd(self, other: "Poly") -> tuple["Poly", "Poly", "Poly"]:
        """Return ``(g, s, t)`` with ``s*self + t*other = g`` monic."""
        g, s, t = self._p.xgcd(other._p)
        return Poly._wrap(g), Poly._wrap(s), Poly._wrap(t)

    def derivative(self) -> "Poly":
        return Poly._wrap(self._p.derivative())

    def shift(self, steps: int | Fraction = 1) -> "Poly":
        return Poly._wrap(self._p(fmpq_poly([to_fmpq(steps), 1])))

    def resultant(self, other: "Poly") -> Fraction:
        return from_fmpq(self._p.resultant(other._p))

    def rational_roots(self) -> list[Fraction]:
        if self.is_zero():
            raise ValueError("zero polynomial has every root")
        _, facs = self._p.factor()
        roots = []
        for f, _ in facs:
            if f.degree() == 1:
                c = f.coeffs()
                roots.append(from_fmpq(-c[0] / c[1]))
        return sorted(roots)

    def content_primitive(self) -> tuple[Fraction, "Poly"]:
        """Split into a positive rational content and an integer primitive part."""
        if self.is_zero():
            return Fraction(0), self
        cs = self.coeffs()
        den = math.lcm(*(c.denominator for c in cs))
        ints = [int(c * den) for c in cs]
        g = math.gcd(*ints)
        return Fraction(g, den), Poly([i // g for i in ints])

    # -- display ----------------------------------------------------------
    def __str__(self) -> str:
        return format_poly(self.coeffs(), "x")

    def __repr__(self) -> str:
        return f"Poly({self})"


def _fmt_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c.numerator}/{c.denominator})"


def format_poly(coeffs: Sequence[Fraction], var: str) -> str:
    """Render ascending ``coeffs`` in the parser's text syntax."""
    parts: list[str] = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[k])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = _fmt_coeff(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; ``poly_gcd(0, 0) == 0``."""
    if a.is_zero() and b.is_zero():
        return Poly()
    return Poly._wrap(a._p.gcd(b._p)).monic()


def poly_lcm(polys: Iterable[Poly]) -> Poly:
    out = Poly([1])
    for p in polys:
        if not p.is_zero():
            out = out.lcm(p)
    return out


class RatFunc:
    """A reduced fraction ``num/den`` of polynomials with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Scalar = 0, den: Poly | Scalar = 1, *, _reduced: bool = False):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if not isinstance(den, Poly):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly([1])
            else:
                g = num._p.gcd(den._p)
                n, d = num._p / g, den._p / g
                lc = d.leading_coefficient()
                num, den = Poly._wrap(n / lc), Poly._wrap(d / lc)
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: fmpq_poly, den: fmpq_poly) -> "RatFunc":
        # num/den already coprime, den monic
        obj = cls.__new__(cls)
        obj.num = Poly._wrap(num)
        obj.den = Poly._wrap(den)
        return obj

    @classmethod
    def _make(cls, num: fmpq_poly, den: fmpq_poly) -> "RatFunc":
        if num.is_zero():
            return cls._raw(num, fmpq_poly([1]))
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return cls._raw(num, den)

    @classmethod
    def x(cls) -> "RatFunc":
        return cls(Poly.x())

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den._p.degree() == 0

    def is_proper(self) -> bool:
        return self.num.degree <= self.den.degree

    def is_strictly_proper(self) -> bool:
        return self.num.degree < self.den.degree

    def poly_part(self) -> tuple[Poly, "RatFunc"]:
        """Split into polynomial part and strictly proper remainder."""
        q, r = divmod(self.num, self.den)
        return q, RatFunc._raw(r._p, self.den._p) if r else RatFunc()

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    @property
    def height(self) -> int:
        """max(deg num, deg den), with 0 for the zero function."""
        return max(0, self.num.degree, self.den.degree)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc._raw(other._p, fmpq_poly([1]))
        if isinstance(other, (int, Fraction)):
            return RatFunc._raw(fmpq_poly([to_fmpq(other)]), fmpq_poly([1]))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.num._p, self.den._p, o.num._p, o.den._p
        if b == d:
            return RatFunc._make(a + c, b)
        return RatFunc._make(a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.num._p, self.den._p)

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
            return RatFunc()
        a, b, c, d = self.num._p, self.den._p, o.num._p, o.den._p
        # cross-cancel before multiplying
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        num = (a / g1) * (c / g2)
        den = (b / g2) * (d / g1)
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFunc._raw(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        n, d = self.num._p, self.den._p
        lc = n.leading_coefficient()
        return RatFunc._raw(d / lc, n / lc)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._raw(self.num._p ** k, self.den._p ** k)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num._p == o.num._p and self.den._p == o.den._p

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __call__(self, v):
        if isinstance(v, (RatFunc, Poly)):
            v = RatFunc._coerce(v)
            return _compose(self, v)
        d = self.den(v)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at {v}")
        return self.num(v) / d

    def derivative(self) -> "RatFunc":
        n, d = self.num._p, self.den._p
        return RatFunc._make(n.derivative() * d - n * d.derivative(), d * d)

    def shift(self, steps: int | Fraction = 1) -> "RatFunc":
        s = fmpq_poly([to_fmpq(steps), 1])
        return RatFunc._raw(self.num._p(s), self.den._p(s))

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def _compose(f: RatFunc, g: RatFunc) -> RatFunc:
    """``f(g(x))`` by homogenised evaluation."""
    gn, gd = g.num._p, g.den._p

    def hom(p: fmpq_poly, n: int) -> fmpq_poly:
        acc = fmpq_poly([])
        cs = p.coeffs()
        for i, c in enumerate(cs):
            if c != 0:
                acc += c * gn ** i * gd ** (n - i)
        return acc

    n_deg = max(f.num._p.degree(), 0)
    d_deg = max(f.den._p.degree(), 0)
    top = max(n_deg, d_deg)
    num = hom(f.num._p, n_deg) * gd ** (top - n_deg)
    den = hom(f.den._p, d_deg) * gd ** (top - d_deg)
    if den.is_zero():
        raise ZeroDivisionError("composition lands on a pole")
    return RatFunc._make(num, den)


# -- derivations, shifts and Moebius substitutions ---------------------------

@dataclass(frozen=True)
class Derivation:
    """The derivation ``p(x) * d/dx``."""

    p: Poly

    def __post_init__(self):
        if self.p.is_zero():
            raise ValueError("zero multiplier does not define a derivation")

    def __call__(self, f: RatFunc) -> RatFunc:
        return apply_derivation(self, f)


D_X = Derivation(Poly([1]))
EULER = Derivation(Poly([0, 1]))


def apply_derivation(delta: Derivation, f: RatFunc | Poly) -> RatFunc:
    f = RatFunc._coerce(f)
    if f.is_polynomial():
        return RatFunc(delta.p * f.num.derivative())
    return f.derivative() * delta.p


def apply_shift(f: RatFunc | Poly, steps: int = 1) -> RatFunc:
    return RatFunc._coerce(f).shift(steps)


@dataclass(frozen=True)
class Mobius:
    """The change of variable ``x -> (a*x + b)/(c*x + d)``."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("degenerate Moebius transformation")
        if self.c == 0:
            raise ValueError("Moebius transformation must move infinity (c != 0)")

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def u(self) -> Poly:
        """Denominator ``c*x + d``."""
        return Poly([self.d, self.c])

    @property
    def image_of_infinity(self) -> Fraction:
        return self.a / self.c

    def as_ratfunc(self) -> RatFunc:
        return RatFunc(Poly([self.b, self.a]), self.u)

    def __call__(self, v: Fraction) -> Fraction:
        return (self.a * v + self.b) / (self.c * v + self.d)


def mobius_substitute(f: RatFunc | Poly, mu: Mobius) -> RatFunc:
    return _compose(RatFunc._coerce(f), mu.as_ratfunc())


def as_ratfunc(v) -> RatFunc:
    out = RatFunc._coerce(v)
    if out is None:
        raise TypeError(f"cannot interpret {v!r} as a rational function")
    return out
