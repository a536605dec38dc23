"""Skew polynomials in ``D = p(x) d/dx`` or in the shift ``S: x -> x+1``.

Commutation rules: ``D*f = f*D + p*f'`` and ``S*f = f(x+1)*S``.  Three
symbols are recognised in text: ``Dx`` (p = 1), ``Ex`` (p = x, the Euler
operator) and ``Sx``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .algebra import Derivation, Poly, RatFunc, apply_derivation, as_ratfunc, poly_lcm
from .parsing import ParseError, parse_expression, tokenize
from .series import PrecisionError, SeqWindow, TruncSeries

__all__ = [
    "OreKind",
    "OrePoly",
    "DX",
    "EX",
    "SX",
    "KindMismatch",
    "ore_mul",
    "ore_right_divrem",
    "ore_apply",
    "parse_operator",
]


class KindMismatch(TypeError):
    pass


@dataclass(frozen=True)
class OreKind:
    """``Diff(p)`` when ``p`` is set, ``Shift`` otherwise."""

    p: Poly | None = None

    def __post_init__(self):
        if self.p is not None and (self.p.is_zero() or self.p.degree > 1):
            raise ValueError("Diff kind requires a nonzero p of degree at most 1")

    @classmethod
    def diff(cls, p: Poly | None = None) -> "OreKind":
        return cls(Poly([1]) if p is None else p)

    @classmethod
    def shift(cls) -> "OreKind":
        return cls(None)

    @property
    def is_shift(self) -> bool:
        return self.p is None

    @property
    def is_diff(self) -> bool:
        return self.p is not None

    @property
    def symbol(self) -> str:
        if self.p is None:
            return "Sx"
        if self.p == Poly([1]):
            return "Dx"
        if self.p == Poly([0, 1]):
            return "Ex"
        return f"D[{self.p}]"

    def act(self, f: RatFunc) -> RatFunc:
        """``D(f)`` or ``S(f)`` on a rational function."""
        if self.p is None:
            return f.shift(1)
        return apply_derivation(Derivation(self.p), f)

    def __repr__(self) -> str:
        return f"OreKind({self.symbol})"


DX = OreKind.diff()
EX = OreKind.diff(Poly([0, 1]))
SX = OreKind.shift()

Coeff = Union[RatFunc, Poly, int, Fraction]


class OrePoly:
    """``sum c_i * D^i`` with rational function coefficients (left form)."""

    __slots__ = ("kind", "coeffs")

    def __init__(self, kind: OreKind, coeffs: Sequence[Coeff] = ()):
        cs = [as_ratfunc(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.kind = kind
        self.coeffs: tuple[RatFunc, ...] = tuple(cs)

    @classmethod
    def generator(cls, kind: OreKind) -> "OrePoly":
        return cls(kind, [0, 1])

    @classmethod
    def const(cls, kind: OreKind, c: Coeff) -> "OrePoly":
        return cls(kind, [c])

    # -- inspection -------------------------------------------------------
    @property
    def order(self) -> int:
        """Top index; -1 for the zero operator."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> RatFunc:
        if not self.coeffs:
            raise ValueError("zero operator has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> RatFunc:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else RatFunc()

    def common_denominator(self) -> Poly:
        return poly_lcm(c.den for c in self.coeffs if c)

    def polynomial_coeffs(self) -> list[Poly]:
        """Coefficients after multiplying by the common denominator."""
        g = self.common_denominator()
        return [(g * c).as_poly() for c in self.coeffs]

    @property
    def degree(self) -> int:
        """Largest coefficient degree once denominators are cleared."""
        if self.is_zero():
            raise ValueError("degree of the zero operator")
        return int(max(p.degree for p in self.polynomial_coeffs()))

    def normalized(self) -> "OrePoly":
        """Left multiple by a rational function: integer polynomial
        coefficients, content 1, leading coefficient with positive lead."""
        if self.is_zero():
            return self
        ps = self.polynomial_coeffs()
        g = Poly()
        for p in ps:
            g = g.gcd(p)
        ps = [p.exquo(g) for p in ps]
        den = 1
        for p in ps:
            for c in p.coeffs():
                den = math.lcm(den, c.denominator)
        ints = [[int(c * den) for c in p.coeffs()] for p in ps]
        content = math.gcd(*(c for cs in ints for c in cs))
        sign = -1 if ps[-1].lc < 0 else 1
        return OrePoly(self.kind, [Poly([sign * c // content for c in cs]) for cs in ints])

    def monic(self) -> "OrePoly":
        inv = self.lc.inverse()
        return OrePoly(self.kind, [inv * c for c in self.coeffs])

    def is_proportional(self, other: "OrePoly") -> bool:
        """Equal up to a left factor in Q(x)."""
        if self.kind != other.kind or self.order != other.order:
            return False
        if self.is_zero():
            return True
        return self.monic() == other.monic()

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "OrePoly"):
        if self.kind != other.kind:
            raise KindMismatch(f"cannot combine {self.kind.symbol} and {other.kind.symbol} operators")

    def _coerce(self, other) -> "OrePoly | None":
        if isinstance(other, OrePoly):
            self._check(other)
            return other
        if isinstance(other, (RatFunc, Poly, int, Fraction)):
            return OrePoly(self.kind, [other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return OrePoly(self.kind, [self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return OrePoly(self.kind, [-c for c in self.coeffs])

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
        return ore_mul(self, o)

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ore_mul(o, self)

    def __truediv__(self, other):
        """Right multiplication by the inverse of an order-0 operator."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.order != 0:
            raise ValueError("can only divide by a rational function")
        return ore_mul(self, OrePoly(self.kind, [o.coeffs[0].inverse()]))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> "OrePoly":
        if k < 0:
            if self.order != 0:
                raise ValueError("negative power of a non-scalar operator")
            return OrePoly(self.kind, [self.coeffs[0] ** k])
        out = OrePoly(self.kind, [1])
        for _ in range(k):
            out = ore_mul(out, self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrePoly):
            return NotImplemented
        return self.kind == other.kind and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.kind.symbol, self.coeffs))

    # -- actions ----------------------------------------------------------
    def apply_ratfunc(self, f: RatFunc) -> RatFunc:
        out = RatFunc()
        cur = as_ratfunc(f)
        for i, c in enumerate(self.coeffs):
            if c:
                out = out + c * cur
            if i < self.order:
                cur = self.kind.act(cur)
        return out

    def __call__(self, s):
        return ore_apply(self, s)

    def to_dx(self) -> "OrePoly":
        """Rewrite a ``p(x) d/dx`` operator in powers of ``d/dx``."""
        if self.kind.is_shift:
            raise KindMismatch("shift operators have no d/dx form")
        if self.kind == DX:
            return self
        delta = OrePoly(DX, [0, self.kind.p])
        out = OrePoly(DX, [])
        power = OrePoly(DX, [1])
        for c in self.coeffs:
            if c:
                out = out + ore_mul(OrePoly(DX, [c]), power)
            power = ore_mul(delta, power)
        return out

    def translate(self, c: int | Fraction) -> "OrePoly":
        """Substitute ``x -> x + c`` (d/dx or shift form only)."""
        if self.kind.is_diff and self.kind != DX:
            return self.to_dx().translate(c)
        return OrePoly(self.kind, [f.shift(c) for f in self.coeffs])

    # -- display ----------------------------------------------------------
    def __str__(self) -> str:
        return format_operator(self)

    def __repr__(self) -> str:
        return f"OrePoly({self.kind.symbol}: {self})"


def _lmul_generator(B: OrePoly) -> list[RatFunc]:
    """Coefficients of ``D * B``."""
    kind = B.kind
    n = len(B.coeffs)
    out = [RatFunc() for _ in range(n + 1)]
    for j, b in enumerate(B.coeffs):
        if not b:
            continue
        if kind.is_shift:
            out[j + 1] = out[j + 1] + b.shift(1)
        else:
            out[j + 1] = out[j + 1] + b
            out[j] = out[j] + kind.act(b)
    return out


def ore_mul(A: OrePoly, B: OrePoly) -> OrePoly:
    if A.kind != B.kind:
        raise KindMismatch(f"cannot multiply {A.kind.symbol} by {B.kind.symbol}")
    if A.is_zero() or B.is_zero():
        return OrePoly(A.kind, [])
    acc = [RatFunc() for _ in range(A.order + B.order + 1)]
    cur = B
    for i, a in enumerate(A.coeffs):
        if a:
            for j, c in enumerate(cur.coeffs):
                if c:
                    acc[j] = acc[j] + a * c
        if i < A.order:
            cur = OrePoly(A.kind, _lmul_generator(cur))
    return OrePoly(A.kind, acc)


def ore_right_divrem(A: OrePoly, B: OrePoly) -> tuple[OrePoly, OrePoly]:
    """``A = Q*B + R`` with ``order(R) < order(B)``."""
    if A.kind != B.kind:
        raise KindMismatch(f"cannot divide {A.kind.symbol} by {B.kind.symbol}")
    if B.is_zero():
        raise ZeroDivisionError("right division by the zero operator")
    kind = A.kind
    q = [RatFunc() for _ in range(max(A.order - B.order + 1, 0))]
    R = A
    while not R.is_zero() and R.order >= B.order:
        k = R.order - B.order
        lb = B.lc.shift(k) if kind.is_shift else B.lc
        c = R.lc / lb
        q[k] = q[k] + c
        term = OrePoly(kind, [0] * k + [c])
        R = R - ore_mul(term, B)
        assert R.is_zero() or R.order < B.order + k
    return OrePoly(kind, q), R


def ore_apply(A: OrePoly, s):
    """Apply to a truncated series (d/dx kinds) or a sequence window (shift).

    Returns a series whose ``precision`` attribute, or a window whose
    length, reports exactly how much of the image is known.
    """
    if isinstance(s, TruncSeries):
        if A.kind.is_shift:
            raise KindMismatch("shift operators act on sequences, not series")
        out = None
        cur = s
        p = A.kind.p
        for i, c in enumerate(A.coeffs):
            if c:
                if c.den(0) == 0:
                    raise ZeroDivisionError(f"coefficient {c} has a pole at 0")
                term = cur * c
                out = term if out is None else out + term
            if i < A.order:
                if cur.precision == 0:
                    raise PrecisionError("series precision exhausted")
                cur = cur.derivative() * p
        if out is None:
            return TruncSeries([], s.precision)
        return out
    if isinstance(s, SeqWindow):
        if A.kind.is_diff:
            raise KindMismatch("differential operators act on series, not sequences")
        r = A.order
        n_out = len(s) - max(r, 0)
        if n_out <= 0:
            raise PrecisionError("sequence window too short for the operator order")
        vals = []
        for n in range(s.start, s.start + n_out):
            acc = Fraction(0)
            for i, c in enumerate(A.coeffs):
                if c:
                    d = c.den(n)
                    if d == 0:
                        raise ZeroDivisionError(f"coefficient {c} has a pole at {n}")
                    acc += c.num(n) / d * s.at(n + i)
            vals.append(acc)
        return SeqWindow(tuple(vals), s.start)
    raise TypeError(f"cannot apply an operator to {type(s).__name__}")


# -- text form ---------------------------------------------------------------

_SYMBOLS = {"Dx": DX, "Ex": EX, "Sx": SX}


def parse_operator(text: str, default: OreKind = DX) -> OrePoly:
    """Parse e.g. ``(x^2+1)*Dx^2 + x*Dx - 3``; mixing symbols is an error."""
    used = {}
    for kind_, val, pos in tokenize(text):
        if kind_ == "name" and val in _SYMBOLS:
            used.setdefault(val, pos)
    if len(used) > 1:
        names = sorted(used, key=used.get)
        raise ParseError(f"mixed operator symbols {', '.join(names)}", used[names[1]])
    kind = _SYMBOLS[next(iter(used))] if used else default
    env = {"x": OrePoly(kind, [Poly.x()]), kind.symbol: OrePoly.generator(kind)}
    try:
        return parse_expression(text, env, lambda c: OrePoly(kind, [c]))
    except ParseError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), 0) from None


def _coeff_text(c: RatFunc) -> tuple[str, str]:
    """Sign and body of a coefficient, parenthesised when needed."""
    if c.is_polynomial():
        cs = c.num.coeffs()
        nz = [i for i, v in enumerate(cs) if v]
        if len(nz) == 1:
            body = str(c.num)
            if body.startswith("-"):
                return "-", body[1:]
            return "+", body
        return "+", f"({c.num})"
    return "+", f"(({c.num})/({c.den}))"


def format_operator(L: OrePoly) -> str:
    if L.is_zero():
        return "0"
    sym = L.kind.symbol
    parts: list[tuple[str, str]] = []
    for i in range(L.order, -1, -1):
        c = L.coeffs[i]
        if not c:
            continue
        sign, body = _coeff_text(c)
        if i == 0:
            parts.append((sign, body))
            continue
        mono = sym if i == 1 else f"{sym}^{i}"
        if body == "1":
            parts.append((sign, mono))
        else:
            parts.append((sign, f"{body}*{mono}"))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
