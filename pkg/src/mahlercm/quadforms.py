"""Positive definite binary quadratic forms: reduction, class numbers,
discriminant tables, and the CM points they describe."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import mpmath

from .errors import BadDiscriminant
from .qseries import prime_divisors


@dataclass(frozen=True, order=True)
class QuadForm:
    """a x^2 + b x y + c y^2; as a CM point, the root (-b + sqrt(D)) / 2a."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return math.gcd(math.gcd(self.a, self.b), self.c)

    def is_primitive(self) -> bool:
        return self.content == 1

    def primitive(self) -> "QuadForm":
        g = self.content
        return QuadForm(self.a // g, self.b // g, self.c // g)

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def _check_definite(f: QuadForm):
    if f.a <= 0 or f.discriminant >= 0:
        raise ValueError(f"{f} is not positive definite")


def reduce(f: QuadForm) -> QuadForm:
    """Reduced representative: |b| <= a <= c, b >= 0 when |b| = a or a = c."""
    _check_definite(f)
    a, b, c = f.a, f.b, f.c
    while True:
        if b > a or b <= -a:
            # translate x -> x + k y so that -a < b <= a
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


def is_discriminant(D: int) -> bool:
    return D < 0 and D % 4 in (0, 1)


def reduced_forms(D: int, primitive_only: bool = True) -> List[QuadForm]:
    """All reduced forms of discriminant D (enumeration over b)."""
    if not is_discriminant(D):
        raise BadDiscriminant(f"{D} is not a negative discriminant")
    out = []
    bmax = math.isqrt(-D // 3)
    for b in range(-bmax, bmax + 1):
        if (b - D) % 2:
            continue
        ac = (b * b - D) // 4
        a = max(abs(b), 1)
        while a * a <= ac:
            if ac % a == 0:
                f = QuadForm(a, b, ac // a)
                if f.is_reduced() and (not primitive_only or f.is_primitive()):
                    out.append(f)
            a += 1
    out.sort(key=lambda f: (f.a, abs(f.b), f.b < 0, f.c))
    return out


def class_number(D: int) -> int:
    """h(D): number of reduced primitive forms of discriminant D."""
    return len(reduced_forms(D))


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = pow(D % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def fundamental_part(D: int) -> Tuple[int, int]:
    """Write D = f^2 D0 with D0 fundamental; returns (D0, f)."""
    if not is_discriminant(D):
        raise BadDiscriminant(f"{D} is not a negative discriminant")
    f = 1
    d = D
    for p in prime_divisors(-D):
        while d % (p * p) == 0:
            cand = d // (p * p)
            if is_discriminant(cand):
                d = cand
                f *= p
            else:
                break
    return d, f


def is_fundamental(D: int) -> bool:
    return fundamental_part(D)[1] == 1


def unit_index(D_fund: int, m: int) -> int:
    if m > 1 and D_fund == -3:
        return 3
    if m > 1 and D_fund == -4:
        return 2
    return 1


def class_number_by_order_formula(D_fund: int, m: int) -> Fraction:
    """h(m^2 D) = h(D) m / [O*:O'*] prod_{p | m} (1 - (D/p)/p)."""
    val = Fraction(class_number(D_fund) * m, unit_index(D_fund, m))
    for p in prime_divisors(m):
        val *= 1 - Fraction(kronecker(D_fund, p), p)
    return val


@dataclass(frozen=True)
class DiscriminantRecord:
    D: int
    h: int


def _fundamental_with_small_h(hmax: int, bound: int) -> List[int]:
    return [D for D in range(-3, -bound - 1, -1)
            if is_discriminant(D) and is_fundamental(D) and class_number(D) <= hmax]


def discriminants_with_h_leq_2(fundamental_bound: int = 500) -> List[DiscriminantRecord]:
    """All D < 0 with h(D) <= 2.

    Fundamental discriminants with h <= 2 are scanned up to
    ``fundamental_bound`` (the complete lists stop at -163 and -427).  For each,
    conductors are enlarged while the order formula stays <= 2; since
    h(m^2 D)/h(D) >= m/[O*:O'*] prod(1 - 1/p), the scan over m stops once this
    lower bound exceeds 2.  Every hit is re-verified by enumeration.
    """
    out = []
    for D0 in _fundamental_with_small_h(2, fundamental_bound):
        m = 1
        while True:
            lower = Fraction(m, unit_index(D0, m))
            for p in prime_divisors(m):
                lower *= 1 - Fraction(1, p)
            if lower * class_number(D0) > 2:
                break
            h = class_number_by_order_formula(D0, m)
            if h <= 2:
                D = m * m * D0
                hh = class_number(D)
                if hh != h:
                    raise AssertionError(f"order formula disagrees with enumeration at D={D}")
                out.append(DiscriminantRecord(D, hh))
            m += 1
    out.sort(key=lambda r: (r.h, -r.D))
    return out


def discriminant_lists() -> Tuple[List[int], List[int]]:
    recs = discriminants_with_h_leq_2()
    return ([r.D for r in recs if r.h == 1], [r.D for r in recs if r.h == 2])


def discriminants_csv(records: Optional[List[DiscriminantRecord]] = None) -> str:
    records = discriminants_with_h_leq_2() if records is None else records
    lines = ["D,h"] + [f"{r.D},{r.h}" for r in records]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# CM points


def cm_scale(p: QuadForm, n: int) -> QuadForm:
    """Primitive form satisfied by n * tau_p."""
    if n < 1:
        raise ValueError("n must be positive")
    return QuadForm(p.a, n * p.b, n * n * p.c).primitive()


def tau_of(p: QuadForm):
    _check_definite(p)
    D = p.discriminant
    return mpmath.mpc(-p.b, mpmath.sqrt(-D)) / (2 * p.a)


def _tol(tol):
    return mpmath.mpf(2) ** (-mpmath.mp.prec + 16) if tol is None else mpmath.mpf(tol)


def in_F(tau, tol=None) -> bool:
    """Standard fundamental domain; boundary kept on the Re >= 0 side."""
    tol = _tol(tol)
    x, y = tau.real, tau.imag
    if y <= 0 or abs(x) > mpmath.mpf(1) / 2 + tol or abs(tau) < 1 - tol:
        return False
    on_edge = abs(abs(x) - mpmath.mpf(1) / 2) <= tol or abs(abs(tau) - 1) <= tol
    return not (on_edge and x < -tol)


def in_Fprime(tau, tol=None) -> bool:
    """|Re| <= 1/2, |tau - 1/4| >= 1/4, |tau + 1/4| >= 1/4; boundary kept on
    the Re >= 0 side."""
    tol = _tol(tol)
    x, y = tau.real, tau.imag
    q = mpmath.mpf(1) / 4
    if y <= 0 or abs(x) > 2 * q + tol:
        return False
    if abs(tau - q) < q - tol or abs(tau + q) < q - tol:
        return False
    on_edge = (abs(abs(x) - 2 * q) <= tol or abs(abs(tau - q) - q) <= tol
               or abs(abs(tau + q) - q) <= tol)
    return not (on_edge and x < -tol)


def form_in_Fprime(p: QuadForm) -> bool:
    """Exact version of in_Fprime for a CM point: |b| <= a and 4c >= |b|,
    with boundary points kept only when Re tau >= 0 (b <= 0)."""
    a, b, c = p.a, p.b, p.c
    if abs(b) > a or 4 * c < abs(b):
        return False
    if (abs(b) == a or 4 * c == abs(b)) and b > 0:
        return False
    return True


def form_in_F(p: QuadForm) -> bool:
    return p.is_reduced()
