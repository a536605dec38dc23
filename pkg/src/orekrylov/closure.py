"""Polynomials ``J(x, y_{i,j})`` combining solutions of several operators.

``y_{i,j}`` stands for the ``j``-th derivative (or ``j``-th shift) of a
solution of the ``i``-th operator.  Groups are numbered from 1, as in
the usual notation, derivative indices from 0.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import Poly, RatFunc, as_ratfunc, poly_lcm
from .ore import OrePoly
from .parsing import ParseError, parse_expression

__all__ = ["ClosurePoly", "parse_closure", "derivative_rewrite"]

Var = tuple[int, int]
Monomial = tuple[tuple[Var, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps: dict[Var, int] = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


class ClosurePoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | Iterable[tuple[Monomial, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, RatFunc] = {}
        for mono, c in items:
            mono = tuple(sorted((v, e) for v, e in mono if e))
            acc[mono] = acc.get(mono, RatFunc()) + as_ratfunc(c)
        self.terms: dict[Monomial, RatFunc] = {m: c for m, c in sorted(acc.items()) if c}

    @classmethod
    def var(cls, i: int, j: int) -> "ClosurePoly":
        if i < 1 or j < 0:
            raise ValueError(f"bad variable y{i}_{j}")
        return cls({(((i, j), 1),): 1})

    @classmethod
    def const(cls, c) -> "ClosurePoly":
        return cls({(): c})

    @classmethod
    def x(cls) -> "ClosurePoly":
        return cls({(): RatFunc.x()})

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def variables(self) -> set[Var]:
        return {v for m in self.terms for v, _ in m}

    @property
    def groups(self) -> int:
        """Largest group index used (0 if no y variable appears)."""
        return max((v[0] for v in self.variables()), default=0)

    @staticmethod
    def group_degrees(mono: Monomial, s: int) -> tuple[int, ...]:
        k = [0] * s
        for (i, _), e in mono:
            k[i - 1] += e
        return tuple(k)

    def degree_vectors(self, s: int | None = None) -> list[tuple[int, ...]]:
        s = self.groups if s is None else s
        return sorted({self.group_degrees(m, s) for m in self.terms})

    def is_homogeneous(self, s: int | None = None) -> bool:
        return len(self.degree_vectors(s)) <= 1

    def homogeneous_parts(self, s: int | None = None) -> dict[tuple[int, ...], "ClosurePoly"]:
        s = self.groups if s is None else s
        parts: dict[tuple[int, ...], dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.group_degrees(m, s), {})[m] = c
        return {k: ClosurePoly(v) for k, v in sorted(parts.items())}

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.terms.values())

    def common_denominator(self) -> Poly:
        return poly_lcm(c.den for c in self.terms.values())

    @property
    def deg_x(self) -> int:
        """x-degree once denominators are cleared."""
        if not self.terms:
            return 0
        g = self.common_denominator()
        return int(max((c * g).as_poly().degree for c in self.terms.values()))

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "ClosurePoly | None":
        if isinstance(other, ClosurePoly):
            return other
        if isinstance(other, (RatFunc, Poly, int, Fraction)):
            return ClosurePoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ClosurePoly(list(self.terms.items()) + list(o.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return ClosurePoly({m: -c for m, c in self.terms.items()})

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
        return ClosurePoly([(_mono_mul(a, b), ca * cb)
                            for a, ca in self.terms.items() for b, cb in o.terms.items()])

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if list(o.terms) != [()]:
            raise ValueError("can only divide by a nonzero function of x")
        inv = o.terms[()].inverse()
        return ClosurePoly({m: c * inv for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "ClosurePoly":
        if k < 0:
            raise ValueError("negative power")
        out = ClosurePoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    # -- rewriting --------------------------------------------------------
    def reduce(self, Ls: Sequence[OrePoly]) -> "ClosurePoly":
        """Replace every ``y_{i,j}`` with ``j >= order(L_i)`` by its
        expression in ``y_{i,0}, ..., y_{i,r_i - 1}``."""
        if self.groups > len(Ls):
            raise ValueError(f"J uses group {self.groups} but only {len(Ls)} operators were given")
        cache: dict[Var, ClosurePoly] = {}

        def image(v: Var) -> ClosurePoly:
            i, j = v
            if j < Ls[i - 1].order:
                return ClosurePoly.var(i, j)
            if v not in cache:
                lin = derivative_rewrite(Ls[i - 1], j)
                cache[v] = ClosurePoly([((((i, k), 1),), c) for k, c in lin.items()])
            return cache[v]

        out = ClosurePoly()
        for m, c in self.terms.items():
            t = ClosurePoly.const(c)
            for v, e in m:
                t = t * image(v) ** e
            out = out + t
        return out

    # -- display ----------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms.items():
            ys = "*".join(f"y{i}_{j}" + (f"^{e}" if e > 1 else "") for (i, j), e in m)
            if not ys:
                parts.append(f"({c})" if not c.is_polynomial() or c.num.degree > 0 else str(c))
            elif c == 1:
                parts.append(ys)
            elif c == -1:
                parts.append(f"-{ys}")
            else:
                parts.append(f"({c})*{ys}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"ClosurePoly({self})"


def derivative_rewrite(L: OrePoly, j: int) -> dict[int, RatFunc]:
    """``D^j`` applied to a solution of ``L`` as a combination of
    ``D^0, ..., D^(r-1)``, with ``D`` the operator's own generator."""
    r = L.order
    if r < 1:
        raise ValueError("operator of order 0 has no nonzero solutions")
    inv = L.lc.inverse()
    lin = [-L[k] * inv for k in range(r)]
    vec = [RatFunc(int(k == min(j, r - 1))) for k in range(r)]
    for _ in range(j - (r - 1) if j >= r else 0):
        # vec represents D^t; D^(t+1) = D(vec) with D^r rewritten
        if L.kind.is_shift:
            moved = [c.shift(1) for c in vec]
            new = [RatFunc()] + moved[:-1]
        else:
            new = [L.kind.act(c) for c in vec]
            moved = vec
            for k in range(r - 1):
                new[k + 1] = new[k + 1] + vec[k]
        top = moved[-1]
        if top:
            new = [a + top * b for a, b in zip(new, lin)]
        vec = new
    return {k: c for k, c in enumerate(vec) if c}


def parse_closure(text: str) -> ClosurePoly:
    """Parse ``y1_0^2 + x*y1_1*y2_0``; variable ``yI_J`` is the ``J``-th
    derivative of a solution of the ``I``-th operator."""

    class _Names(dict):
        def __contains__(self, key):
            return key == "x" or _var(key) is not None

        def __getitem__(self, key):
            if key == "x":
                return ClosurePoly.x()
            return ClosurePoly.var(*_var(key))

    def _var(name: str):
        if not name.startswith("y") or "_" not in name:
            return None
        a, _, b = name[1:].partition("_")
        if not (a.isdigit() and b.isdigit()) or int(a) < 1:
            return None
        return int(a), int(b)

    try:
        return parse_expression(text, _Names(), ClosurePoly.const)
    except ParseError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), 0) from None

