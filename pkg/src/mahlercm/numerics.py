"""Arbitrary-precision helpers: precision contexts, tanh-sinh quadrature and
minimal-polynomial recognition by integer lattice reduction.

Real and complex numbers are mpmath ``mpf``/``mpc`` values; the working
precision is the one of the active ``mpmath.mp`` context.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Sequence

import mpmath
from mpmath import mp

from .errors import InsufficientPrecision, NoConvergence

DEFAULT_PREC = 256
GUARD_BITS = 64


def workprec(bits: int):
    """Context manager setting the binary working precision."""
    return mp.workprec(int(bits))


def current_prec() -> int:
    return mp.prec


def to_decimal_string(x, prec: Optional[int] = None) -> str:
    """Decimal string carrying enough digits to reproduce ``x`` at ``prec`` bits."""
    prec = prec or mp.prec
    digits = int(math.ceil(prec * math.log10(2))) + 2
    with workprec(prec):
        return mpmath.nstr(mpmath.mpmathify(x), digits, strip_zeros=False)


def from_decimal_string(s: str, prec: Optional[int] = None):
    prec = prec or mp.prec
    with workprec(prec):
        return mpmath.mpmathify(s)


# ---------------------------------------------------------------------------
# quadrature


@lru_cache(maxsize=64)
def _ts_level(prec: int, level: int):
    """Tanh-sinh abscissae for step h = 2**-level on [-1, 1].

    Returns tuples (k, c, w) for k >= 0 where the node is 1 - c (and its
    mirror), c = 1 - tanh(pi/2 sinh(kh)) computed without cancellation.
    Level 0 holds all k; higher levels only the odd k.
    """
    with workprec(prec + 20):
        h = mpmath.mpf(2) ** (-level)
        halfpi = mp.pi / 2
        tiny = mpmath.mpf(2) ** (-prec - 10)
        out = []
        k = 0 if level == 0 else 1
        step = 1 if level == 0 else 2
        while True:
            t = k * h
            u = halfpi * mpmath.sinh(t)
            e = mpmath.exp(2 * u)
            c = 2 / (e + 1)
            ch = mpmath.cosh(u)
            w = halfpi * mpmath.cosh(t) / (ch * ch)
            if c < tiny or w < tiny:
                break
            out.append((k, +c, +w))
            k += step
        return tuple(out)


def _ts_sum(f, a, b, prec, level, singular=False):
    """Raw tanh-sinh sum at one level (without the step factor h)."""
    total = mpmath.mpf(0)
    if not singular:
        half = (b - a) / 2
        for k, c, w in _ts_level(prec, level):
            if k == 0:
                total += w * f((a + b) / 2)
                continue
            dist = half * c
            tr = b - dist
            tl = a + dist
            if tr != b:
                total += w * f(tr)
            if tl != a:
                total += w * f(tl)
        return total * half
    # substitution t = a + L sin^2(s/2), s in [0, pi]; distances to the ends
    # are carried explicitly so nodes next to a singular endpoint stay exact
    L = b - a
    halfpi = mp.pi / 2
    for k, c, w in _ts_level(prec, level):
        if k == 0:
            total += w * f(a + L / 2) * L / 2
            continue
        ds = halfpi * c
        sh = mpmath.sin(ds / 2)
        off = L * sh * sh
        jac = L * mpmath.sin(ds) / 2
        if a + off != a:
            total += w * f(a + off) * jac
        if b - off != b:
            total += w * f(b - off) * jac
    return total * halfpi


def adaptive_integrate(f: Callable, a, b, eps=None, endpoint_singularity: bool = False,
                       max_level: int = 12, min_level: int = 3):
    """Integral of ``f`` over [a, b] by tanh-sinh with step halving.

    Each level halves the step and reuses the previous nodes.  The difference
    of two consecutive levels is the error estimate; iteration stops once it
    drops below ``eps`` (default: 2**(8 - prec)).

    With ``endpoint_singularity`` the substitution t = a + (b-a) sin^2(s/2)
    is applied first, which turns inverse square-root endpoint behaviour
    into a smooth integrand.
    """
    prec = mp.prec
    a = mpmath.mpf(a)
    b = mpmath.mpf(b)
    if eps is None:
        eps = mpmath.mpf(2) ** (8 - prec)
    eps = mpmath.mpf(eps)
    if a == b:
        return mpmath.mpf(0)
    if b < a:
        return -adaptive_integrate(f, b, a, eps, endpoint_singularity, max_level, min_level)

    sing = bool(endpoint_singularity)
    raw = _ts_sum(f, a, b, prec, 0, sing)
    h = mpmath.mpf(1)
    estimate = raw
    prev = None
    for level in range(1, max_level + 1):
        h = h / 2
        raw += _ts_sum(f, a, b, prec, level, sing)
        new = raw * h
        if prev is not None and level >= min_level and abs(new - estimate) < eps:
            return new
        prev = estimate
        estimate = new
    raise NoConvergence(f"tanh-sinh did not reach eps={mpmath.nstr(eps, 3)} after "
                        f"{max_level} levels (last change {mpmath.nstr(abs(estimate - prev), 3)})")


# ---------------------------------------------------------------------------
# integer relations


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients listed from the constant term up."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        g = self.content() or 1
        c = [v // g for v in self.coeffs]
        if c[-1] < 0:
            c = [-v for v in c]
        return IntPolynomial(tuple(c))

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("x" if i == 1 else f"x^{i}")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    def to_list(self) -> List[int]:
        return list(self.coeffs)


def lll_reduce(basis: Sequence[Sequence[int]], delta=(99, 100)) -> List[List[int]]:
    """LLL reduction of linearly independent integer row vectors.

    All-integer variant (subdeterminants d_i and scaled Gram-Schmidt
    coefficients), so no rational or floating arithmetic is involved.
    """
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n <= 1:
        return b
    dn, dd = delta

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    d = [0] * (n + 1)  # d[0] = 1, d[i] for i = 1..n
    d[0] = 1
    lam = [[0] * n for _ in range(n)]
    d[1] = dot(b[0], b[0])
    if d[1] == 0:
        raise ValueError("zero vector in basis")
    k = 1
    kmax = 0

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            bk, bl = b[k], b[l]
            for i in range(len(bk)):
                bk[i] -= q * bl[i]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k + 1] = u
                    if u == 0:
                        raise ValueError("basis vectors are dependent")
        red(k, k - 1)
        lm = lam[k][k - 1]
        if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lm * lm:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b


def _relation_lattice(x, degree: int, B: int):
    scale = mpmath.mpf(2) ** B
    powers = [mpmath.mpf(1)]
    for _ in range(degree):
        powers.append(powers[-1] * x)
    is_complex = any(mpmath.im(p) != 0 for p in powers)
    rows = []
    for j, p in enumerate(powers):
        row = [0] * (degree + 1)
        row[j] = 1
        row.append(int(mpmath.nint(mpmath.re(p) * scale)))
        if is_complex:
            row.append(int(mpmath.nint(mpmath.im(p) * scale)))
        rows.append(row)
    return rows, powers


def integer_relation(x, max_degree: int, max_coeff_bits: int = 32,
                     guard: int = GUARD_BITS) -> Optional[IntPolynomial]:
    """Smallest-degree primitive integer polynomial vanishing at ``x``.

    Degrees 1..max_degree are tried in turn.  For each, the lattice spanned by
    the rows [e_j | round(2^B Re x^j), round(2^B Im x^j)] with B = prec - 32 is
    LLL-reduced and its shortest row read as a candidate p.  A candidate is
    accepted when its coefficients fit in ``max_coeff_bits`` and p(x) vanishes
    to within 2^16 ulps of the size of its terms at full precision.  A random
    real number gives a shortest row with coefficients near 2^(B/(deg+1)),
    which the precision requirement pushes past ``max_coeff_bits``.

    Returns None when nothing is found.  Raises InsufficientPrecision when
    the working precision cannot support the requested search, or when a
    short candidate only vanishes at lattice scale (the grey zone above the
    recognition tolerance 2^(-B/4) is never reached by a true relation).
    """
    x = mpmath.mpmathify(x)
    prec = mp.prec
    need = (max_degree + 1) * max_coeff_bits + guard
    if prec < need:
        raise InsufficientPrecision(
            f"working precision {prec} bits < required {need} bits for degree "
            f"{max_degree} with {max_coeff_bits}-bit coefficients")
    B = prec - 32
    accept = mpmath.mpf(2) ** (16 - prec)
    grey = mpmath.mpf(2) ** (-B // 4)
    for deg in range(1, max_degree + 1):
        rows, powers = _relation_lattice(x, deg, B)
        red = lll_reduce(rows)
        best = None
        for row in red:
            c = row[: deg + 1]
            if any(v != 0 for v in c) and c[-1] != 0:
                best = c
                break
        if best is None:
            continue
        if max(abs(v) for v in best).bit_length() > max_coeff_bits:
            continue
        val = abs(sum(ci * p for ci, p in zip(best, powers)))
        size = sum(abs(ci) * abs(p) for ci, p in zip(best, powers))
        rel = val / size
        if rel <= accept:
            return IntPolynomial(tuple(best)).primitive()
        if rel <= grey:
            raise InsufficientPrecision(
                f"ambiguous relation at degree {deg}: residual 2^{int(mpmath.log(rel, 2))}")
    return None
