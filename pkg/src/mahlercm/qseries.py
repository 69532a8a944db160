"""Exact truncated q-expansions: eta quotients, theta series with the
character chi_{-4} and a linear weight, series arithmetic, Sturm checks."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import NonIntegralCoefficients, TruncationTooShort

Number = Union[int, Fraction]


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def kronecker_m4(n: int) -> int:
    """The character chi_{-4} = (-4/n)."""
    if n % 2 == 0:
        return 0
    return 1 if n % 4 == 1 else -1


class PowerSeriesZ:
    """q^base * sum_{i < order} c_i q^i with exactly known coefficients.

    ``base`` is a Fraction whose denominator divides 24.  Coefficients with
    index >= order are unknown; arithmetic keeps the smallest order of its
    operands.
    """

    __slots__ = ("base", "coeffs", "order")

    def __init__(self, coeffs: Sequence[Number], base: Number = 0, order: Optional[int] = None):
        base = Fraction(base)
        if 24 % base.denominator:
            raise ValueError(f"base exponent {base} is off the (1/24)Z grid")
        order = len(coeffs) if order is None else int(order)
        c = [_norm(Fraction(v) if isinstance(v, Fraction) else int(v)) for v in list(coeffs)[:order]]
        c += [0] * (order - len(c))
        self.base = base
        self.coeffs = c
        self.order = order

    # -- access -----------------------------------------------------------
    def __getitem__(self, exponent) -> Number:
        """Coefficient of q^exponent (absolute exponent)."""
        idx = Fraction(exponent) - self.base
        if idx.denominator != 1:
            return 0
        i = int(idx)
        if i < 0:
            return 0
        if i >= self.order:
            raise TruncationTooShort(f"coefficient of q^{exponent} beyond order {self.order}")
        return self.coeffs[i]

    @property
    def precision(self) -> Fraction:
        """First absolute exponent whose coefficient is unknown."""
        return self.base + self.order

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def integer_coefficients(self, upto: Optional[int] = None) -> List[Number]:
        """List a_0..a_{upto-1} of a series with integral exponents."""
        if self.base.denominator != 1:
            raise ValueError(f"series has fractional exponents (base {self.base})")
        b = int(self.base)
        top = self.base + self.order if upto is None else upto
        if top > self.base + self.order:
            raise TruncationTooShort(f"need {top} terms, series known below q^{self.precision}")
        out = []
        for e in range(int(top)):
            out.append(self[e] if e >= b else 0)
        return out

    def nonzero_terms(self, count: Optional[int] = None) -> List[Tuple[Fraction, Number]]:
        out = []
        for i, c in enumerate(self.coeffs):
            if c != 0:
                out.append((self.base + i, c))
                if count is not None and len(out) >= count:
                    break
        return out

    # -- arithmetic -------------------------------------------------------
    def _align(self, other: "PowerSeriesZ"):
        shift = other.base - self.base
        if shift.denominator != 1:
            raise ValueError("cannot add series living on different exponent cosets")
        return int(shift)

    def __add__(self, other):
        if not isinstance(other, PowerSeriesZ):
            if other == 0:
                return self
            if self.base > 0 or (-self.base).denominator != 1:
                raise ValueError("scalar addition needs an integral exponent grid reaching q^0")
            out = list(self.coeffs)
            out[int(-self.base)] += other
            return PowerSeriesZ(out, self.base, self.order)
        self._align(other)
        base = min(self.base, other.base)
        prec = min(self.precision, other.precision)
        n = max(int(prec - base), 0)
        out = [0] * n
        for s in (self, other):
            off = int(s.base - base)
            for i, c in enumerate(s.coeffs):
                if off + i < n:
                    out[off + i] += c
        return PowerSeriesZ(out, base, n)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeriesZ([-c for c in self.coeffs], self.base, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s: Number) -> "PowerSeriesZ":
        s = Fraction(s)
        return PowerSeriesZ([c * s for c in self.coeffs], self.base, self.order)

    def __mul__(self, other):
        if not isinstance(other, PowerSeriesZ):
            return self.scale(other)
        order = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [0] * order
        nb = [(j, c) for j, c in enumerate(b[:order]) if c]
        for i in range(order):
            ai = a[i]
            if not ai:
                continue
            for j, c in nb:
                if i + j >= order:
                    break
                out[i + j] += ai * c
        return PowerSeriesZ(out, self.base + other.base, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, PowerSeriesZ):
            return self.scale(Fraction(1) / Fraction(other))
        return self * other.inverse()

    def inverse(self) -> "PowerSeriesZ":
        """Series inverse; the leading coefficient must be nonzero."""
        if not self.coeffs or self.coeffs[0] == 0:
            raise ZeroDivisionError("leading coefficient is zero")
        order = self.order
        lead = self.coeffs[0]
        unit = lead in (1, -1)
        inv0 = lead if unit else Fraction(1) / Fraction(lead)
        a = self.coeffs
        nz = [(j, c) for j, c in enumerate(a) if c and j > 0]
        out = [0] * order
        out[0] = inv0
        for i in range(1, order):
            s = 0
            for j, c in nz:
                if j > i:
                    break
                s += c * out[i - j]
            out[i] = -s * inv0
        return PowerSeriesZ(out, -self.base, order)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = PowerSeriesZ([1], 0, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def dilate(self, d: int) -> "PowerSeriesZ":
        """Substitute q -> q^d."""
        d = int(d)
        if d == 1:
            return self
        order = d * (self.order - 1) + 1 if self.order else 0
        out = [0] * order
        for i, c in enumerate(self.coeffs):
            out[d * i] = c
        return PowerSeriesZ(out, self.base * d, order)

    def truncate(self, order: int) -> "PowerSeriesZ":
        order = min(order, self.order)
        return PowerSeriesZ(self.coeffs[:order], self.base, order)

    def __eq__(self, other):
        if not isinstance(other, PowerSeriesZ):
            return NotImplemented
        return (self.base == other.base and self.order == other.order
                and self.coeffs == other.coeffs)

    def __repr__(self):
        terms = []
        for e, c in self.nonzero_terms(8):
            terms.append(f"{c}*q^{e}")
        return f"PowerSeriesZ({' + '.join(terms) or '0'} + O(q^{self.precision}))"

    # -- serialization ------------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "base_exponent": str(self.base),
            "coefficients": [str(c) if isinstance(c, Fraction) else c for c in self.coeffs],
            "order": self.order,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PowerSeriesZ":
        coeffs = [Fraction(c) if isinstance(c, str) else int(c) for c in obj["coefficients"]]
        return cls(coeffs, Fraction(obj["base_exponent"]), int(obj["order"]))

    @classmethod
    def from_json(cls, s: str) -> "PowerSeriesZ":
        return cls.from_json_obj(json.loads(s))


# ---------------------------------------------------------------------------
# eta products


def pentagonal_terms(limit: int) -> List[Tuple[int, int]]:
    """Sparse (exponent, sign) list of prod_{n>=1}(1-q^n) below q^limit."""
    out = [(0, 1)]
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 >= limit:
            break
        s = -1 if k % 2 else 1
        out.append((e1, s))
        e2 = k * (3 * k + 1) // 2
        if e2 < limit:
            out.append((e2, s))
        k += 1
    out.sort()
    return out


def eta_expansion(order: int) -> PowerSeriesZ:
    """eta(tau) = q^(1/24) prod (1 - q^n), known for order terms."""
    if order < 1:
        raise ValueError("order must be >= 1")
    c = [0] * order
    for e, s in pentagonal_terms(order):
        c[e] = s
    return PowerSeriesZ(c, Fraction(1, 24), order)


@dataclass(frozen=True)
class EtaQuotient:
    """prod_m eta(m tau)^{r_m}, given as ((m, r_m), ...)."""

    terms: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        t = tuple((int(m), int(r)) for m, r in self.terms)
        ms = [m for m, _ in t]
        if any(m <= 0 for m in ms) or len(set(ms)) != len(ms):
            raise ValueError("eta quotient divisors must be distinct and positive")
        object.__setattr__(self, "terms", t)

    @property
    def base_exponent(self) -> Fraction:
        return Fraction(sum(m * r for m, r in self.terms), 24)

    def to_json_obj(self) -> dict:
        return {"type": "eta", "terms": [list(t) for t in self.terms]}


def _sparse_mul(a: List[int], sparse, order):
    out = [0] * order
    for i, ai in enumerate(a):
        if not ai:
            continue
        for e, s in sparse:
            j = i + e
            if j >= order:
                break
            out[j] += ai * s
    return out


def _sparse_div(a: List[int], sparse, order):
    # sparse has constant term 1
    out = [0] * order
    tail = [(e, s) for e, s in sparse if e > 0]
    for i in range(order):
        v = a[i]
        for e, s in tail:
            if e > i:
                break
            v -= s * out[i - e]
        out[i] = v
    return out


def eta_quotient_expansion(eq: EtaQuotient, order: int) -> PowerSeriesZ:
    """Exact expansion of an eta quotient, known for ``order`` terms past its
    leading exponent."""
    if order < 1:
        raise ValueError("order must be >= 1")
    series = [1] + [0] * (order - 1)
    for m, r in eq.terms:
        sparse = [(m * e, s) for e, s in pentagonal_terms((order - 1) // m + 1)]
        for _ in range(abs(r)):
            series = _sparse_mul(series, sparse, order) if r > 0 else _sparse_div(series, sparse, order)
    return PowerSeriesZ(series, eq.base_exponent, order)


@dataclass(frozen=True)
class Modularity:
    weight: Fraction
    level: int
    character_discriminant: int

    def to_dict(self):
        return {"weight": str(self.weight), "level": self.level,
                "character_discriminant": self.character_discriminant}


NOT_APPLICABLE = None


def _squarefree_part(n: int) -> int:
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e % 2:
            out *= p
        p += 1
    return sign * out * n


def eta_quotient_modularity(eq: EtaQuotient, max_level: int = 10**4) -> Optional[Modularity]:
    """Weight, smallest admissible level and character of an eta quotient.

    Level search: multiples M of lcm(m) with sum m r_m = 0 and
    sum (M/m) r_m = 0 modulo 24.  Returns None when no M <= max_level works.
    """
    weight = Fraction(sum(r for _, r in eq.terms), 2)
    if sum(m * r for m, r in eq.terms) % 24:
        return NOT_APPLICABLE
    L = 1
    for m, _ in eq.terms:
        L = L * m // math.gcd(L, m)
    level = None
    M = L
    while M <= max_level:
        if sum((M // m) * r for m, r in eq.terms) % 24 == 0:
            level = M
            break
        M += L
    if level is None:
        return NOT_APPLICABLE
    # character from (-1)^k prod m^{r_m}; only the squarefree part matters
    num, den = 1, 1
    for m, r in eq.terms:
        if r > 0:
            num *= m ** r
        else:
            den *= m ** (-r)
    s = _squarefree_part(num * den)
    if weight.denominator == 1 and int(weight) % 2:
        s = -s
    if s == 1:
        disc = 1
    else:
        disc = s if s % 4 == 1 else 4 * s
    return Modularity(weight, level, disc)


# ---------------------------------------------------------------------------
# theta series


@dataclass(frozen=True)
class ThetaSpec:
    """scale * sum_{m,n} chi_{-4}(slot) (alpha m + beta n) q^{A m^2 + B m n + C n^2}.

    ``congruences`` is a tuple of (variable, modulus, residue) constraints.
    """

    A: int
    B: int
    C: int
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(1)
    scale: Fraction = Fraction(1)
    char_slot: str = "n"
    congruences: Tuple[Tuple[str, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        object.__setattr__(self, "scale", Fraction(self.scale))
        object.__setattr__(self, "congruences", tuple(tuple(c) for c in self.congruences))
        if self.A <= 0 or self.B * self.B - 4 * self.A * self.C >= 0:
            raise ValueError(f"form ({self.A},{self.B},{self.C}) is not positive definite")
        if self.char_slot not in ("m", "n"):
            raise ValueError("char_slot must be 'm' or 'n'")

    @property
    def form(self):
        return (self.A, self.B, self.C)

    def to_json_obj(self) -> dict:
        return {
            "type": "theta",
            "form": [self.A, self.B, self.C],
            "linear": [str(self.alpha), str(self.beta)],
            "scale": str(self.scale),
            "char_slot": self.char_slot,
            "congruences": [list(c) for c in self.congruences],
        }


def lattice_points(A: int, B: int, C: int, bound: int) -> Iterable[Tuple[int, int, int]]:
    """All (m, n, Q) with Q = A m^2 + B m n + C n^2 <= bound."""
    disc = 4 * A * C - B * B
    mmax = math.isqrt(4 * C * bound // disc) + 1
    for m in range(-mmax, mmax + 1):
        # C n^2 + B m n + (A m^2 - bound) <= 0
        d = B * B * m * m - 4 * C * (A * m * m - bound)
        if d < 0:
            continue
        r = math.isqrt(d)
        lo = (-B * m - r) // (2 * C) - 1
        hi = (-B * m + r) // (2 * C) + 1
        for n in range(lo, hi + 1):
            q = A * m * m + B * m * n + C * n * n
            if q <= bound:
                yield m, n, q


def theta_expansion(spec: ThetaSpec, order: int, strict: bool = False) -> PowerSeriesZ:
    """Exact q-expansion of a ThetaSpec for exponents 0..order-1.

    Non-integral coefficients are kept as Fractions; with ``strict`` they
    raise NonIntegralCoefficients instead.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    den = spec.alpha.denominator * spec.beta.denominator // math.gcd(spec.alpha.denominator,
                                                                       spec.beta.denominator)
    ai = int(spec.alpha * den)
    bi = int(spec.beta * den)
    acc = [0] * order
    slot_n = spec.char_slot == "n"
    cong = spec.congruences
    for m, n, q in lattice_points(spec.A, spec.B, spec.C, order - 1):
        chi = kronecker_m4(n if slot_n else m)
        if not chi:
            continue
        if cong:
            ok = True
            for var, mod, res in cong:
                if ((n if var == "n" else m) - res) % mod:
                    ok = False
                    break
            if not ok:
                continue
        acc[q] += chi * (ai * m + bi * n)
    factor = spec.scale / den
    coeffs = [_norm(c * factor) for c in acc]
    if strict and any(isinstance(c, Fraction) for c in coeffs):
        raise NonIntegralCoefficients(f"scale {spec.scale} leaves fractional coefficients")
    return PowerSeriesZ(coeffs, 0, order)


# ---------------------------------------------------------------------------
# Sturm bound


def prime_divisors(n: int) -> List[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def gamma0_index(level: int) -> int:
    idx = Fraction(level)
    for p in prime_divisors(level):
        idx *= Fraction(p + 1, p)
    return int(idx)


def sturm_bound(level: int, weight: int) -> int:
    if level < 1 or weight < 1:
        raise ValueError("level and weight must be positive")
    num = weight * gamma0_index(level)
    return -(-num // 12)


def sturm_compare(lhs: PowerSeriesZ, rhs: PowerSeriesZ, level: int, weight: int) -> Dict:
    """Exact coefficient comparison through the Sturm bound (inclusive)."""
    bound = sturm_bound(level, weight)
    for s in (lhs, rhs):
        if s.precision <= bound:
            raise TruncationTooShort(f"series known below q^{s.precision}, Sturm bound is {bound}")
    first = None
    for e in range(0, bound + 1):
        if lhs[e] != rhs[e]:
            first = e
            break
    return {"equal": first is None, "first_mismatch": first, "bound": bound}
