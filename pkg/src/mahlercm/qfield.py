"""Exact arithmetic in Q(sqrt d) and polynomials over it."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

import mpmath

Rational = Union[int, Fraction]


def _squarefree(d: int) -> bool:
    if d in (0, 1):
        return False
    n = abs(d)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


class QuadFieldElem:
    """u + v sqrt(d) with rational u, v and squarefree d (d < 0 allowed)."""

    __slots__ = ("u", "v", "d")

    def __init__(self, u: Rational = 0, v: Rational = 0, d: int = 1):
        u, v = Fraction(u), Fraction(v)
        if v != 0 and not _squarefree(d):
            raise ValueError(f"d = {d} is not squarefree")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "d", int(d))

    def __setattr__(self, *_):
        raise AttributeError("QuadFieldElem is immutable")

    @classmethod
    def sqrt(cls, d: int) -> "QuadFieldElem":
        return cls(0, 1, d)

    # coercion -------------------------------------------------------------
    def _coerce(self, other) -> "QuadFieldElem":
        if isinstance(other, QuadFieldElem):
            if other.v != 0 and self.v != 0 and other.d != self.d:
                raise ValueError(f"mixing Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadFieldElem(other, 0, self.d)
        return NotImplemented

    def _field(self, other: "QuadFieldElem") -> int:
        return self.d if self.v != 0 or other.v == 0 else other.d

    # ring operations ------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadFieldElem(self.u + o.u, self.v + o.v, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElem(-self.u, -self.v, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return QuadFieldElem(self.u * o.u + d * self.v * o.v, self.u * o.v + self.v * o.u, d)

    __rmul__ = __mul__

    def conj(self) -> "QuadFieldElem":
        """The nontrivial automorphism sqrt(d) -> -sqrt(d)."""
        return QuadFieldElem(self.u, -self.v, self.d)

    def norm(self) -> Fraction:
        return self.u * self.u - self.d * self.v * self.v

    def trace(self) -> Fraction:
        return 2 * self.u

    def inverse(self) -> "QuadFieldElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadFieldElem(self.u / n, -self.v / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadFieldElem(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison / misc ----------------------------------------------------
    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def is_rational(self) -> bool:
        return self.v == 0

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is NotImplemented:
            return NotImplemented
        return self.u == o.u and self.v == o.v

    def __hash__(self):
        return hash((self.u, self.v, self.d if self.v else 0))

    def to_mp(self, sign: int = 1):
        """Numeric value under the embedding sqrt(d) -> sign * sqrt(d)."""
        return self.u + sign * self.v * mpmath.sqrt(self.d)

    def __complex__(self):
        return complex(self.to_mp())

    def __repr__(self):
        return f"QuadFieldElem({self.u}, {self.v}, {self.d})"

    def __str__(self):
        if self.v == 0:
            return str(self.u)
        root = f"sqrt({self.d})"
        v = self.v
        vs = root if v == 1 else f"-{root}" if v == -1 else f"{v}*{root}"
        if self.u == 0:
            return vs
        return f"{self.u}{'' if vs.startswith('-') else '+'}{vs}"

    def to_json_obj(self):
        return {"u": str(self.u), "v": str(self.v), "d": self.d}


def Q(u: Rational = 0, v: Rational = 0, d: int = 1) -> QuadFieldElem:
    return QuadFieldElem(u, v, d)


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Polynomial over Q(sqrt d), coefficients from the constant term up."""

    __slots__ = ("c", "d")

    def __init__(self, coeffs: Iterable, d: int):
        cs = [c if isinstance(c, QuadFieldElem) else QuadFieldElem(c, 0, d) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.c: Tuple[QuadFieldElem, ...] = tuple(cs)
        self.d = d

    @classmethod
    def x(cls, d: int) -> "Poly":
        return cls([0, 1], d)

    @classmethod
    def const(cls, a, d: int) -> "Poly":
        return cls([a], d)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> QuadFieldElem:
        return self.c[-1]

    def _lift(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other], self.d)

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.c), len(o.c))
        zero = QuadFieldElem(0, 0, self.d)
        return Poly([(self.c[i] if i < len(self.c) else zero) + (o.c[i] if i < len(o.c) else zero)
                     for i in range(n)], self.d)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.c], self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if self.is_zero() or o.is_zero():
            return Poly([], self.d)
        out = [QuadFieldElem(0, 0, self.d)] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a.is_zero():
                continue
            for j, b in enumerate(o.c):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly([1], self.d)
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [QuadFieldElem(0, 0, self.d)] * max(0, len(r) - len(other.c) + 1)
        inv = other.lead().inverse()
        while len(r) >= len(other.c) and r:
            shift = len(r) - len(other.c)
            f = r[-1] * inv
            q[shift] = f
            for i, b in enumerate(other.c):
                r[i + shift] = r[i + shift] - f * b
            r.pop()
            while r and r[-1].is_zero():
                r.pop()
        return Poly(q, self.d), Poly(r, self.d)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        inv = self.lead().inverse()
        return Poly([a * inv for a in self.c], self.d)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self) -> "Poly":
        return Poly([a * i for i, a in enumerate(self.c)][1:], self.d)

    def conj(self) -> "Poly":
        return Poly([a.conj() for a in self.c], self.d)

    def __call__(self, x):
        acc = QuadFieldElem(0, 0, self.d) if isinstance(x, (QuadFieldElem, int, Fraction)) else 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def eval_mp(self, x, sign: int = 1):
        """Numeric value at x under the embedding sqrt(d) -> sign sqrt(d)."""
        acc = mpmath.mpf(0)
        for a in reversed(self.c):
            acc = acc * x + a.to_mp(sign)
        return acc

    def compose(self, other: "Poly") -> "Poly":
        out = Poly([], self.d)
        for a in reversed(self.c):
            out = out * other + a
        return out

    def __eq__(self, other):
        o = self._lift(other)
        return len(self.c) == len(o.c) and all(a == b for a, b in zip(self.c, o.c))

    def __repr__(self):
        return "Poly([" + ", ".join(str(a) for a in self.c) + f"], d={self.d})"


class RationalFunction:
    """num / den over Q(sqrt d)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        self.num = num
        self.den = den

    def eval_mp(self, x, sign: int = 1):
        return self.num.eval_mp(x, sign) / self.den.eval_mp(x, sign)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(self.num.derivative() * self.den - self.num * self.den.derivative(),
                                self.den * self.den)

    def conj(self) -> "RationalFunction":
        return RationalFunction(self.num.conj(), self.den.conj())

    def equals(self, other: "RationalFunction") -> bool:
        return (self.num * other.den - other.num * self.den).is_zero()

    def __repr__(self):
        return f"({self.num!r}) / ({self.den!r})"


def poly_from_ints(coeffs: Sequence, d: int) -> Poly:
    return Poly(list(coeffs), d)


def as_elem_list(vals: Sequence, d: int) -> List[QuadFieldElem]:
    return [v if isinstance(v, QuadFieldElem) else QuadFieldElem(v, 0, d) for v in vals]
