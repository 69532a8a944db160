"""Search for CM points in F' whose lambda(2 tau) has small degree, and
comparison of the result with the embedded CM-point table."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp

from . import paperdata
from .modular import j_numeric, lambda2
from .numerics import IntPolynomial, integer_relation
from .quadforms import (QuadForm, class_number, cm_scale, discriminant_lists,
                        form_in_Fprime, reduced_forms, tau_of)

Matrix = Tuple[Tuple[int, int], Tuple[int, int]]

S: Matrix = ((0, -1), (1, 0))
T: Matrix = ((1, 1), (0, 1))
I2: Matrix = ((1, 0), (0, 1))


def matmul(x: Matrix, y: Matrix) -> Matrix:
    return ((x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
            (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]))


def matpow_T(n: int) -> Matrix:
    return ((1, n), (0, 1))


# the eight cosets whose images of F cover F'
COVERING: Tuple[Tuple[str, Matrix], ...] = (
    ("I", I2),
    ("S", S),
    ("ST", matmul(S, T)),
    ("ST^-1", matmul(S, matpow_T(-1))),
    ("ST^2", matmul(S, matpow_T(2))),
    ("ST^-2", matmul(S, matpow_T(-2))),
    ("ST^2S", matmul(matmul(S, matpow_T(2)), S)),
    ("ST^-2S", matmul(matmul(S, matpow_T(-2)), S)),
)


def matrix_act(g: Matrix, f: QuadForm) -> QuadForm:
    """Form whose upper half-plane root is g applied to the root of f."""
    (p, q), (r, s) = g
    if p * s - q * r != 1:
        raise ValueError("matrix must have determinant 1")
    a, b, c = f.a, f.b, f.c
    A = a * s * s - b * s * r + c * r * r
    B = -2 * a * s * q + b * (s * p + q * r) - 2 * c * p * r
    C = a * q * q - b * q * p + c * p * p
    if A < 0:
        A, B, C = -A, -B, -C
    return QuadForm(A, B, C).primitive()


@dataclass(frozen=True)
class Table1Row:
    triple: Tuple[int, int, int]
    h2: int
    product: int
    lam: mpmath.mpc

    def lam_str(self, digits: int = 5) -> str:
        return format_complex(self.lam, digits)

    def to_dict(self, digits: int = 5) -> dict:
        return {"triple": list(self.triple), "h_D2tau": self.h2, "product": self.product,
                "lambda": self.lam_str(digits),
                "lambda_re": mpmath.nstr(self.lam.real, 30),
                "lambda_im": mpmath.nstr(self.lam.imag, 30)}


def _truncate(x, digits: int) -> str:
    """x truncated (not rounded) to ``digits`` significant digits."""
    d = Decimal(mpmath.nstr(x, 15, min_fixed=-30, max_fixed=30))
    if d == 0:
        return "0"
    sign = "-" if d < 0 else ""
    d = abs(d)
    e = d.adjusted()
    q = Decimal(1).scaleb(e - digits + 1)
    t = (d // q) * q
    s = format(t, "f")
    return sign + s


def format_complex(z, digits: int = 5, tiny=None) -> str:
    """Printed form of lambda: real part, then signed imaginary part with 'i'."""
    z = mpmath.mpc(z)
    tiny = mpmath.mpf(10) ** -20 if tiny is None else tiny
    re = z.real if abs(z.real) > tiny * max(1, abs(z)) else mpmath.mpf(0)
    im = z.imag if abs(z.imag) > tiny * max(1, abs(z)) else mpmath.mpf(0)
    s = _truncate(re, digits) if re != 0 or im == 0 else ""
    if im != 0:
        t = _truncate(im, digits)
        if s:
            s += t if t.startswith("-") else "+" + t
        else:
            s = t
        s += "i"
    return s


def parse_complex(s: str) -> Tuple[Optional[str], Optional[str]]:
    """Split a printed 'a+bi' string into real and imaginary decimal strings."""
    s = s.strip().replace(" ", "")
    if not s.endswith("i"):
        return s, None
    body = s[:-1]
    cut = max(body.rfind("+", 1), body.rfind("-", 1))
    if cut <= 0:
        return None, body
    return body[:cut], body[cut:]


def _ulp(dec: str) -> Decimal:
    d = Decimal(dec)
    return Decimal(1).scaleb(d.as_tuple().exponent)


def matches_printed(z, printed: str) -> bool:
    """True when each printed component equals the truncation of z at the
    printed number of digits (within one unit in the last printed place)."""
    re_s, im_s = parse_complex(printed)
    z = mpmath.mpc(z)
    for part, val in ((re_s, z.real), (im_s, z.imag)):
        if part is None:
            if abs(val) > mpmath.mpf(10) ** -20 * max(1, abs(z)):
                return False
            continue
        target = Decimal(part)
        ours = Decimal(mpmath.nstr(val, 20, min_fixed=-30, max_fixed=30))
        if abs(ours - target) >= _ulp(part):
            return False
    return True


def closed_domain_points(D: int) -> List[QuadForm]:
    """All CM points of discriminant D in the closed fundamental domain.

    Reduced forms cover only one half of the boundary, so boundary points
    (|b| = a or a = c) are added together with their mirror image.
    """
    out = []
    for f in reduced_forms(D):
        out.append(f)
        if f.b != 0 and (abs(f.b) == f.a or f.a == f.c):
            out.append(QuadForm(f.a, -f.b, f.c))
    return out


def candidate_points(discriminants: Optional[Sequence[int]] = None,
                     require_h4_leq_2: bool = True) -> List[QuadForm]:
    """Steps 1-3: points of the closed fundamental domain, their translates
    into F', and the class number filter.

    With ``require_h4_leq_2`` the discriminant of 4 tau must also have class
    number at most 2 (it must occur in the class-number lists); without it
    only h(D_tau) <= 2 and h(D_tau) h(D_4tau) <= 4 are imposed, which admits
    extra points with h(D_tau) = 1, h(D_4tau) = 4.
    """
    if discriminants is None:
        h1, h2 = discriminant_lists()
        discriminants = h1 + h2
    seen = set()
    out = []
    for D in discriminants:
        for f in closed_domain_points(D):
            for _, g in COVERING:
                p = matrix_act(g, f)
                if p in seen or not form_in_Fprime(p):
                    continue
                seen.add(p)
                hD = class_number(p.discriminant)
                h4 = class_number(cm_scale(p, 4).discriminant)
                if hD <= 2 and hD * h4 <= 4 and (h4 <= 2 or not require_h4_leq_2):
                    out.append(p)
    return out


def _rep_key(f: QuadForm):
    return (f.a, abs(f.b), f.c, f.b)


def algorithm1(search_prec: int = 128, emit_prec: int = 256,
               discriminants: Optional[Sequence[int]] = None,
               require_h4_leq_2: bool = True) -> List[Table1Row]:
    """CM points in F' with h(D_tau) h(D_4tau) <= 4 and distinct lambda(2 tau).

    lambda is computed at ``search_prec`` bits to dedupe (values agreeing to
    5 significant digits are merged, keeping the smallest (a, |b|, c)), and
    the kept rows are re-evaluated at ``emit_prec`` bits.
    """
    cands = candidate_points(discriminants, require_h4_leq_2)
    groups: Dict[str, List[Tuple[QuadForm, mpmath.mpc]]] = {}
    with mp.workprec(search_prec):
        for p in cands:
            lam = lambda2(tau_of(p))
            key = format_complex(lam, 5, tiny=mpmath.mpf(10) ** -15)
            groups.setdefault(key, []).append((p, lam))
    rows = []
    with mp.workprec(emit_prec):
        for key, members in groups.items():
            p, lam_lo = min(members, key=lambda t: _rep_key(t[0]))
            lam = lambda2(tau_of(p))
            if abs(lam - lam_lo) > mpmath.mpf(2) ** (-search_prec + 24) * max(1, abs(lam)):
                raise AssertionError(f"lambda re-verification failed at {p}")
            h2 = class_number(cm_scale(p, 2).discriminant)
            prod = class_number(p.discriminant) * class_number(cm_scale(p, 4).discriminant)
            rows.append(Table1Row(p.as_tuple(), h2, prod, lam))
    rows.sort(key=lambda r: (r.h2, r.product, mpmath.re(r.lam), mpmath.im(r.lam)))
    return rows


@dataclass
class Table1Comparison:
    matched: int
    expected: int
    produced: int
    unmatched_rows: List[Table1Row]
    missing_entries: List[paperdata.Table1Entry]

    @property
    def ok(self) -> bool:
        return not self.unmatched_rows and not self.missing_entries

    def to_dict(self) -> dict:
        return {"matched": self.matched, "expected": self.expected, "produced": self.produced,
                "unmatched_rows": [r.to_dict() for r in self.unmatched_rows],
                "missing_entries": [{"triple": list(e.triple), "h_D2tau": e.h2,
                                     "product": e.product, "lambda": e.lam}
                                    for e in self.missing_entries]}


def compare_table1(rows: Sequence[Table1Row],
                   table: Optional[Sequence[paperdata.Table1Entry]] = None) -> Table1Comparison:
    """Multiset comparison on (h(D_2tau), product, printed lambda)."""
    table = list(paperdata.table1() if table is None else table)
    free = list(range(len(table)))
    unmatched = []
    for r in rows:
        hit = None
        for idx in free:
            e = table[idx]
            if e.h2 == r.h2 and e.product == r.product and matches_printed(r.lam, e.lam):
                hit = idx
                break
        if hit is None:
            unmatched.append(r)
        else:
            free.remove(hit)
    return Table1Comparison(len(rows) - len(unmatched), len(table), len(rows),
                            unmatched, [table[i] for i in free])


# right coset representatives of Gamma0(4) in SL(2, Z)
GAMMA0_4_COSETS: Tuple[Matrix, ...] = (
    I2, ((1, 1), (3, 4)), ((1, 2), (3, 7)), ((1, 3), (3, 10)), ((1, 4), (3, 13)), ((1, 1), (2, 3)))


def degree_bound_separation(p: QuadForm, prec: int = 256):
    """min_i |j(4 tau) - j(4 g_i tau)| / max(1, |j(4 tau)|) over the cosets
    g_i != I.  The class-number degree bound on lambda(2 tau) is only
    guaranteed when this is nonzero."""
    with mp.workprec(prec):
        t = tau_of(p)
        j0 = j_numeric(4 * t)
        seps = []
        for (a, b), (c, d) in GAMMA0_4_COSETS[1:]:
            seps.append(abs(j0 - j_numeric(4 * ((a * t + b) / (c * t + d)))))
        return min(seps) / max(1, abs(j0))


def degree_bound_applies(p: QuadForm, prec: int = 256) -> bool:
    return degree_bound_separation(p, prec) > mpmath.mpf(2) ** (-prec // 2)


@dataclass(frozen=True)
class AlgebraicityResult:
    triple: Tuple[int, int, int]
    product: int
    polynomial: Optional[IntPolynomial]
    bound_applies: bool

    @property
    def degree(self) -> Optional[int]:
        return None if self.polynomial is None else self.polynomial.degree

    @property
    def within_bound(self) -> bool:
        return self.polynomial is not None and self.polynomial.degree <= self.product

    def to_dict(self) -> dict:
        return {"triple": list(self.triple), "product": self.product,
                "polynomial": None if self.polynomial is None else str(self.polynomial),
                "degree": self.degree, "bound_applies": self.bound_applies,
                "within_bound": self.within_bound}


def recognize_lambda(p: QuadForm, max_degree: int, prec: int = 512,
                     coeff_bits: int = 80) -> Optional[IntPolynomial]:
    """Minimal polynomial of lambda(2 tau) by integer relation search; the
    precision is raised if the degree/coefficient budget needs more."""
    prec = max(prec, (max_degree + 1) * coeff_bits + 96)
    with mp.workprec(prec):
        lam = lambda2(tau_of(p))
        return integer_relation(lam, max_degree, max_coeff_bits=coeff_bits)


def algebraicity(rows: Sequence[Table1Row], prec: int = 512, coeff_bits: int = 80,
                 degree_slack: int = 1) -> List[AlgebraicityResult]:
    """Recognize every lambda value, searching up to degree_slack * product."""
    out = []
    for r in rows:
        p = QuadForm(*r.triple)
        poly = recognize_lambda(p, degree_slack * r.product, prec, coeff_bits)
        out.append(AlgebraicityResult(r.triple, r.product, poly, degree_bound_applies(p)))
    return out


def rows_csv(rows: Sequence[Table1Row]) -> str:
    lines = ["a,b,c,h_D2tau,product,lambda"]
    for r in rows:
        a, b, c = r.triple
        lines.append(f"{a},{b},{c},{r.h2},{r.product},{r.lam_str()}")
    return "\n".join(lines) + "\n"
