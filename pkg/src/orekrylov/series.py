"""Truncated power series at 0 and finite sequence windows."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from flint import fmpq_poly

from .algebra import Poly, RatFunc, from_fmpq, to_fmpq


def _inv_series(d: fmpq_poly, n: int) -> fmpq_poly:
    """``1/d mod x^n`` by Newton iteration; needs ``d(0) != 0``."""
    inv = fmpq_poly([1 / d[0]])
    k = 1
    while k < n:
        k = min(2 * k, n)
        e = fmpq_poly([2]) - d.mul_low(inv, k)
        inv = inv.mul_low(e, k)
    return inv


class PrecisionError(ValueError):
    """Operation would leave no known coefficients."""


class TruncSeries:
    """A power series known modulo ``x^precision``."""

    __slots__ = ("_p", "precision")

    def __init__(self, coeffs: Sequence = (), precision: int | None = None):
        coeffs = list(coeffs)
        if precision is None:
            precision = len(coeffs)
        if precision < 0:
            raise PrecisionError("negative precision")
        self._p = fmpq_poly([to_fmpq(c) for c in coeffs[:precision]])
        self.precision = precision

    @classmethod
    def _wrap(cls, p: fmpq_poly, precision: int) -> "TruncSeries":
        obj = cls.__new__(cls)
        obj._p = p.truncate(precision) if precision > 0 else fmpq_poly()
        obj.precision = precision
        return obj

    @classmethod
    def from_poly(cls, p: Poly, precision: int) -> "TruncSeries":
        return cls._wrap(p._p, precision)

    @classmethod
    def from_ratfunc(cls, f: RatFunc, precision: int) -> "TruncSeries":
        """Expansion at 0; the denominator must not vanish there."""
        d = f.den._p
        if d[0] == 0:
            raise ZeroDivisionError(f"{f} has a pole at 0")
        inv = _inv_series(d, precision) if precision > 0 else fmpq_poly()
        return cls._wrap(f.num._p.mul_low(inv, precision) if precision > 0 else fmpq_poly(), precision)

    @property
    def coeffs(self) -> list[Fraction]:
        cs = [from_fmpq(c) for c in self._p.coeffs()]
        return cs + [Fraction(0)] * (self.precision - len(cs))

    def __getitem__(self, k: int) -> Fraction:
        if k >= self.precision:
            raise PrecisionError(f"coefficient {k} beyond precision {self.precision}")
        return from_fmpq(self._p[k]) if k <= self._p.degree() else Fraction(0)

    def __len__(self) -> int:
        return self.precision

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def valuation(self) -> int:
        """Index of the first nonzero coefficient (``precision`` if none)."""
        if self._p.is_zero():
            return self.precision
        cs = self._p.coeffs()
        return next(i for i, c in enumerate(cs) if c != 0)

    def _other(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncSeries._wrap(fmpq_poly([to_fmpq(other)]), self.precision)
        if isinstance(other, Poly):
            return TruncSeries._wrap(other._p, self.precision)
        if isinstance(other, RatFunc):
            return TruncSeries.from_ratfunc(other, self.precision)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        n = min(self.precision, o.precision)
        return TruncSeries._wrap(self._p + o._p, n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._wrap(-self._p, self.precision)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        # known mod x^(v1 + n2) and x^(n1 + v2)
        n = min(self.precision + o.valuation(), o.precision + self.valuation())
        if n <= 0:
            return TruncSeries._wrap(fmpq_poly(), max(n, 0))
        return TruncSeries._wrap(self._p.mul_low(o._p, n), n)

    __rmul__ = __mul__

    def derivative(self) -> "TruncSeries":
        if self.precision == 0:
            raise PrecisionError("derivative of a series with no known terms")
        return TruncSeries._wrap(self._p.derivative(), self.precision - 1)

    def truncate(self, n: int) -> "TruncSeries":
        return TruncSeries._wrap(self._p, min(n, self.precision))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = min(self.precision, other.precision)
        return self._p.truncate(n) == other._p.truncate(n) if n > 0 else True

    def __repr__(self) -> str:
        return f"TruncSeries({self.coeffs}, precision={self.precision})"


@dataclass(frozen=True)
class SeqWindow:
    """Values ``u(start), u(start+1), ...`` of a sequence."""

    values: tuple[Fraction, ...]
    start: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    def at(self, n: int) -> Fraction:
        k = n - self.start
        if not 0 <= k < len(self.values):
            raise PrecisionError(f"index {n} outside the known window")
        return self.values[k]

    def is_zero(self) -> bool:
        return not any(self.values)

    def __mul__(self, other: "SeqWindow") -> "SeqWindow":
        lo = max(self.start, other.start)
        hi = min(self.start + len(self), other.start + len(other))
        return SeqWindow(tuple(self.at(n) * other.at(n) for n in range(lo, hi)), lo)

    def __add__(self, other: "SeqWindow") -> "SeqWindow":
        lo = max(self.start, other.start)
        hi = min(self.start + len(self), other.start + len(other))
        return SeqWindow(tuple(self.at(n) + other.at(n) for n in range(lo, hi)), lo)
