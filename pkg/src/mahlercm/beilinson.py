"""Regulator verification for E_k over real quadratic fields.

For each case the curve E = E_k and its conjugate E^sigma = E_{k^sigma} are
linked by an isogeny phi built with x-only Velu/Kohel formulas and a twist.
Deninger paths give H_1^- generators, pushforward multipliers come from
period ratios, and the regulator determinant is compared with the L-value
product const/pi^4 L(f, 2) L(g, 2).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp

from .errors import AGMBranchFailure, KernelNotSubgroup, NotNearInteger
from .expr import eval_k
from .lvalues import (F32, F64, PAIR_RELATIONS, effective_coefficient, extract_conjugate_pair,
                      find_row, lvalue2)
from .mahler import branch_data, mahler_jensen, roots_y
from .numerics import adaptive_integrate
from .paperdata import CASES
from .qfield import Poly, QuadFieldElem, RationalFunction

CASE_IDS = ("6", "7.1", "7.2", "7.3", "7.4")


def _elem(spec, d: int) -> QuadFieldElem:
    """(m, u, v) -> m (u + v sqrt d); (u, v) -> u + v sqrt d."""
    if len(spec) == 3:
        m, u, v = spec
    else:
        m, (u, v) = 1, spec
    return QuadFieldElem(Fraction(m) * Fraction(u), Fraction(m) * Fraction(v), d)


def _poly(coeffs, d: int) -> Poly:
    return Poly([_elem(c, d) for c in coeffs], d)


def _printed_map(spec, d: int) -> RationalFunction:
    (m, u, v, e), nums, dens = spec
    scalar = QuadFieldElem(Fraction(m), 0, d) * QuadFieldElem(Fraction(u), Fraction(v), d) ** e
    num = Poly([scalar], d)
    for f in nums:
        num = num * _poly(f, d)
    den = Poly([1], d)
    for f in dens:
        den = den * _poly(f, d)
    return RationalFunction(num, den)


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class Curve:
    """Y^2 = X^3 + a2 X^2 + a4 X + a6 over Q(sqrt d)."""

    a2: QuadFieldElem
    a4: QuadFieldElem
    a6: QuadFieldElem
    chart: str = "none"

    def __post_init__(self):
        if self.discriminant().is_zero():
            raise ValueError("singular curve")

    @property
    def d(self) -> int:
        for c in (self.a2, self.a4, self.a6):
            if c.v != 0:
                return c.d
        return self.a2.d

    def cubic(self) -> Poly:
        return Poly([self.a6, self.a4, self.a2, 1], self.d)

    def discriminant(self) -> QuadFieldElem:
        b2, b4, b6 = 4 * self.a2, 2 * self.a4, 4 * self.a6
        b8 = 4 * self.a2 * self.a6 - self.a4 * self.a4
        return -(b2 * b2 * b8) - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def c4_c6(self):
        b2, b4, b6 = 4 * self.a2, 2 * self.a4, 4 * self.a6
        return b2 * b2 - 24 * b4, -(b2 ** 3) + 36 * b2 * b4 - 216 * b6

    def conj(self) -> "Curve":
        return Curve(self.a2.conj(), self.a4.conj(), self.a6.conj(), self.chart)

    def numeric(self, sign: int = 1):
        return tuple(c.to_mp(sign) for c in (self.a2, self.a4, self.a6))

    def residual(self, P, sign: int = 1):
        a2, a4, a6 = self.numeric(sign)
        x, y = P
        return abs(y * y - (((x + a2) * x + a4) * x + a6))

    def j_invariant(self, sign: int = 1):
        c4, _ = self.c4_c6()
        return c4.to_mp(sign) ** 3 / self.discriminant().to_mp(sign)

    def same_as(self, other: "Curve") -> bool:
        return self.a2 == other.a2 and self.a4 == other.a4 and self.a6 == other.a6

    def to_dict(self) -> dict:
        return {"a2": str(self.a2), "a4": str(self.a4), "a6": str(self.a6), "chart": self.chart}


def curve_from_k(k2: QuadFieldElem, chart: str) -> Curve:
    """Weierstrass model of P_k = 0 from k^2 in Q(sqrt d).

    plain: Y^2 = X^3 + (k^2/4 - 2) X^2 + X;  rotated: Y^2 = X^3 + (k^2/2 - 4) X^2 + 4 X.
    """
    d = k2.d
    zero = QuadFieldElem(0, 0, d)
    if chart == "plain":
        return Curve(k2 / 4 - 2, QuadFieldElem(1, 0, d), zero, chart)
    if chart == "rotated":
        return Curve(k2 / 2 - 4, QuadFieldElem(4, 0, d), zero, chart)
    raise ValueError(f"unknown chart {chart!r}")


# numeric group law (a1 = a3 = 0) -------------------------------------------

def ec_add(P, Q, a2, a4):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    scale = 1 + abs(x1) + abs(x2)
    if abs(x1 - x2) <= scale * mpmath.mpf(2) ** (20 - mp.prec):
        if abs(y1 + y2) <= (1 + abs(y1)) * mpmath.mpf(2) ** (20 - mp.prec):
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - a2 - x1 - x2
    return x3, -(y1 + lam * (x3 - x1))


def ec_neg(P):
    return None if P is None else (P[0], -P[1])


def ec_mul(n: int, P, a2, a4):
    if n < 0:
        return ec_mul(-n, ec_neg(P), a2, a4)
    R = None
    while n:
        if n & 1:
            R = ec_add(R, P, a2, a4)
        P = ec_add(P, P, a2, a4)
        n >>= 1
    return R


def random_points(curve: Curve, count: int, seed: int = 1, sign: int = 1):
    """Deterministic pseudo-random complex points on the curve."""
    rng = random.Random(seed)
    a2, a4, a6 = curve.numeric(sign)
    out = []
    while len(out) < count:
        x = mpmath.mpc(rng.uniform(-3, 3), rng.uniform(-3, 3))
        y = mpmath.sqrt(((x + a2) * x + a4) * x + a6)
        out.append((x, y))
    return out


# ---------------------------------------------------------------------------
# isogenies


@dataclass
class Isogeny:
    """(X, Y) -> (xmap(X), Y * ymap(X))."""

    domain: Curve
    codomain: Curve
    xmap: RationalFunction
    ymap: RationalFunction
    degree: int
    kernel: Poly

    def __call__(self, P, sign: int = 1):
        if P is None:
            return None
        x, y = P
        den = self.xmap.den.eval_mp(x, sign)
        if abs(den) <= mpmath.mpf(2) ** (40 - mp.prec) * (1 + abs(x)) ** self.xmap.den.degree:
            return None
        return self.xmap.eval_mp(x, sign), y * self.ymap.eval_mp(x, sign)

    def conj(self) -> "Isogeny":
        return Isogeny(self.domain.conj(), self.codomain.conj(), self.xmap.conj(), self.ymap.conj(),
                       self.degree, self.kernel.conj())


def _rf_add(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    return _rf_reduce(RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den))


def _rf_reduce(r: RationalFunction) -> RationalFunction:
    g = r.num.gcd(r.den) if not r.num.is_zero() else r.den.monic()
    if g.degree > 0:
        r = RationalFunction(r.num // g, r.den // g)
    lead = r.den.lead()
    inv = lead.inverse()
    return RationalFunction(Poly([c * inv for c in r.num.c], r.num.d),
                            Poly([c * inv for c in r.den.c], r.den.d))


def _rf_scale(r: RationalFunction, c: QuadFieldElem) -> RationalFunction:
    return RationalFunction(r.num * c, r.den)


def _root_sum(h: Poly, P: Poly) -> QuadFieldElem:
    """sum of h(x_Q) over the roots of the monic polynomial P."""
    if P.degree <= 0:
        return QuadFieldElem(0, 0, P.d)
    R = (h * P.derivative()) % P
    n = P.degree
    return R.c[n - 1] if len(R.c) >= n else QuadFieldElem(0, 0, P.d)


def _kernel_is_subgroup(curve: Curve, psi: Poly, sign: int = 1) -> bool:
    a2, a4, a6 = curve.numeric(sign)
    xs = mpmath.polyroots([c.to_mp(sign) for c in reversed(psi.c)], maxsteps=200, extraprec=2 * mp.prec)
    pts = []
    for x in xs:
        y = mpmath.sqrt(((x + a2) * x + a4) * x + a6)
        pts += [(x, y), (x, -y)]
    tol = mpmath.mpf(10) ** (-mp.dps // 2)
    for P in pts:
        for Q in pts:
            S = ec_add(P, Q, a2, a4)
            if S is None:
                continue
            if min(abs(S[0] - x) for x in xs) > tol * (1 + abs(S[0])):
                return False
    return True


def velu_isogeny(curve: Curve, kernel: Poly) -> Isogeny:
    """Normalized isogeny with kernel given by its x-coordinate polynomial.

    Kohel's form of Velu: roots shared with the cubic are 2-torsion points
    (v = g, u = 0), the others stand for pairs +-Q (v = 2g, u = 4 f), with
    g = f'.  Then t = sum v, w = sum (u + x_Q v),
      A4 = a4 - 5 t,  A6 = a6 - 4 a2 t - 7 w,
      X = x + sum v/(x - x_Q) + u/(x - x_Q)^2,  Y = y X'(x).
    Sums over roots are traces in Q(sqrt d)[x]/(psi).
    """
    d = curve.d
    psi = kernel.monic()
    f = curve.cubic()
    g = f.derivative()
    two = psi.gcd(f)
    odd = psi // two
    if not (two * odd - psi).is_zero() or odd.gcd(odd.derivative()).degree > 0:
        raise KernelNotSubgroup("kernel polynomial is not squarefree")
    if not _kernel_is_subgroup(curve, psi):
        raise KernelNotSubgroup("roots of the kernel polynomial are not closed under addition")
    x = Poly.x(d)
    zero = Poly([], d)
    t = QuadFieldElem(0, 0, d)
    w = QuadFieldElem(0, 0, d)
    X = RationalFunction(x, Poly([1], d))
    for part, v, u in ((two, g, zero), (odd, g * 2, f * 4)):
        if part.degree <= 0:
            continue
        t = t + _root_sum(v, part)
        w = w + _root_sum(u + x * v, part)
        Rv = (v * part.derivative()) % part
        Ru = (u * part.derivative()) % part
        X = _rf_add(X, RationalFunction(Rv, part))
        if not Ru.is_zero():
            dRu = RationalFunction(Ru, part).derivative()
            X = _rf_add(X, RationalFunction(-dRu.num, dRu.den))
    A4 = curve.a4 - 5 * t
    A6 = curve.a6 - 4 * curve.a2 * t - 7 * w
    codomain = Curve(curve.a2, A4, A6, "none")
    Y = _rf_reduce(X.derivative())
    degree = 2 * odd.degree + two.degree + 1
    return Isogeny(curve, codomain, _rf_reduce(X), Y, degree, psi)


@dataclass
class Isomorphism:
    """(X, Y) -> (u^2 X + r, u^3 Y)."""

    u: QuadFieldElem
    r: QuadFieldElem
    domain: Curve
    codomain: Curve

    def __call__(self, P, sign: int = 1):
        if P is None:
            return None
        u = self.u.to_mp(sign)
        return u * u * P[0] + self.r.to_mp(sign), u ** 3 * P[1]

    def inverse(self) -> "Isomorphism":
        ui = self.u.inverse()
        return Isomorphism(ui, -(self.r * ui * ui), self.codomain, self.domain)


def twist(curve: Curve, u: QuadFieldElem, r: QuadFieldElem):
    """Image of the curve under (X, Y) -> (u^2 X + r, u^3 Y)."""
    if u.is_zero():
        raise ValueError("u must be nonzero")
    u2 = u * u
    A2, A4, A6 = curve.a2 * u2, curve.a4 * u2 * u2, curve.a6 * u2 ** 3
    # (X - r)^3 + A2 (X - r)^2 + A4 (X - r) + A6
    b2 = A2 - 3 * r
    b4 = 3 * r * r - 2 * A2 * r + A4
    b6 = -(r ** 3) + A2 * r * r - A4 * r + A6
    image = Curve(b2, b4, b6, curve.chart)
    return image, Isomorphism(u, r, curve, image)


def compose_twist(iso_u: QuadFieldElem, iso_r: QuadFieldElem, phi: Isogeny, target: Curve) -> Isogeny:
    u2 = iso_u * iso_u
    X = RationalFunction(phi.xmap.num * u2 + phi.xmap.den * iso_r, phi.xmap.den)
    Y = _rf_scale(phi.ymap, iso_u ** 3)
    return Isogeny(phi.domain, target, _rf_reduce(X), _rf_reduce(Y), phi.degree, phi.kernel)


# ---------------------------------------------------------------------------
# case dossiers


@dataclass
class Case:
    cid: str
    d: int
    chart: str
    k_expr: str
    k_conj_expr: str
    E: Curve
    Es: Curve
    kernel: Poly
    u: QuadFieldElem
    r: QuadFieldElem
    printed_x: RationalFunction
    printed_y: RationalFunction
    degree: int
    composite_sign: int
    multiplier: QuadFieldElem
    pushforward: Tuple[int, int]
    pairing_scale: Tuple[int, int]
    constant: int
    theta_exprs: Dict[str, str]
    raw: dict = field(repr=False, default_factory=dict)

    @property
    def k(self):
        return eval_k(self.k_expr)

    @property
    def k_conj(self):
        return eval_k(self.k_conj_expr)


def load_case(cid: str) -> Case:
    if cid not in CASES:
        raise KeyError(f"unknown case {cid!r}; expected one of {CASE_IDS}")
    c = CASES[cid]
    d = c["d"]
    k2 = _elem(c["k2"], d)
    E = curve_from_k(k2, c["chart"])
    Es = curve_from_k(k2.conj(), c["chart"])
    u = _elem(c["u"], d)
    A2 = E.a2
    r = _elem(c["r"], d) if "r" in c else (u * u * A2 - Es.a2) / 3
    return Case(cid, d, c["chart"], c["k"], c["k_conj"], E, Es, _poly(c["kernel"], d), u, r,
                _printed_map(c["phi_x"], d), _printed_map(c["phi_y"], d), c["degree"],
                c["composite_sign"], _elem(c["multiplier"], d), tuple(c["pushforward"]),
                tuple(c["pairing_scale"]), c["constant"], dict(c["theta_exprs"]), dict(c))


def build_isogeny(case: Case):
    """Velu isogeny, the twist onto E^sigma and their composite phi."""
    psi = velu_isogeny(case.E, case.kernel)
    image, iso = twist(psi.codomain, case.u, case.r)
    phi = compose_twist(case.u, case.r, psi, image)
    return psi, image, iso, phi


def printed_isogeny(case: Case) -> Isogeny:
    return Isogeny(case.E, case.Es, case.printed_x, case.printed_y, case.degree, case.kernel)


def measured_multiplier(phi: Isogeny, P, sign: int = 1):
    """c in phi^* omega' = c omega at P: (dX'/dX) / (Y'/Y) = xmap'(X) / ymap(X)."""
    x = P[0]
    dx = mpmath.diff(lambda t: phi.xmap.eval_mp(t, sign), x)
    return dx / phi.ymap.eval_mp(x, sign)


def check_isogeny_identities(cid: str, points: int = 20, seed: int = 7, dps: int = 40) -> dict:
    """Velu reconstruction, codomain, kernel, composite and multiplier checks."""
    with mp.workdps(dps):
        case = load_case(cid)
        psi, image, iso, phi = build_isogeny(case)
        printed = printed_isogeny(case)
        report: Dict[str, object] = {"case": cid, "degree": phi.degree}
        report["twisted_codomain_is_conjugate"] = image.same_as(case.Es)
        report["maps_equal_exactly"] = (phi.xmap.equals(printed.xmap) and phi.ymap.equals(printed.ymap))
        if "intermediate" in case.raw:
            a2, a4, a6 = (_elem(t, case.d) for t in case.raw["intermediate"])
            report["intermediate_matches"] = (psi.codomain.a2 == a2 and psi.codomain.a4 == a4
                                              and psi.codomain.a6 == a6)
            px = _printed_map(case.raw["psi_x"], case.d)
            py = _printed_map(case.raw["psi_y"], case.d)
            report["intermediate_maps_equal"] = psi.xmap.equals(px) and psi.ymap.equals(py)
        pts = random_points(case.E, points, seed)
        phis = printed.conj()
        a2, a4, _ = case.E.numeric()
        n = case.composite_sign * case.degree
        map_res, land_res, comp_res, mult_res = [], [], [], []
        c_exact = case.multiplier.to_mp()
        for P in pts:
            Q1, Q2 = phi(P), printed(P)
            map_res.append(max(abs(Q1[0] - Q2[0]), abs(Q1[1] - Q2[1])) / (1 + abs(Q2[0]) + abs(Q2[1])))
            land_res.append(case.Es.residual(Q2) / (1 + abs(Q2[1]) ** 2))
            R = phis(Q2)
            nP = ec_mul(n, P, a2, a4)
            comp_res.append(max(abs(R[0] - nP[0]), abs(R[1] - nP[1])) / (1 + abs(nP[0]) + abs(nP[1])))
            mult_res.append(abs(measured_multiplier(printed, P) - c_exact))
        report["map_residual"] = max(map_res)
        report["codomain_residual"] = max(land_res)
        report["composite"] = f"[{n}]"
        report["composite_residual"] = max(comp_res)
        report["multiplier"] = str(case.multiplier)
        report["multiplier_residual"] = max(mult_res)
        # kernel points go to O: the X-map denominator vanishes on them
        xs = mpmath.polyroots([c.to_mp() for c in reversed(case.kernel.monic().c)], maxsteps=200,
                              extraprec=2 * mp.prec)
        report["kernel_to_O"] = all(printed((x, mpmath.sqrt(case.E.cubic().eval_mp(x)))) is None
                                    for x in xs)
        report["ok"] = bool(report["twisted_codomain_is_conjugate"] and report["maps_equal_exactly"]
                            and report["kernel_to_O"] and report["map_residual"] < 1e-25
                            and report["composite_residual"] < 1e-25
                            and report["multiplier_residual"] < 1e-20
                            and report.get("intermediate_matches", True)
                            and report.get("intermediate_maps_equal", True))
    return report


# ---------------------------------------------------------------------------
# Deninger paths and integrals


@dataclass
class PathSpec:
    """Segments (theta_a, theta_b, branch, orientation) on the curve over |x| = 1.

    Branch 1 is the root y1 with |y1| >= 1, branch 2 is y2 = 1/y1.
    """

    k: object
    chart: str
    segments: List[Tuple[object, object, int, int]]

    @property
    def kind(self) -> str:
        return "loop" if len(self.segments) == 1 else "arcs"

    def point(self, theta, branch: int):
        x = mpmath.expj(theta)
        y1, y2 = roots_y(x, self.k)
        return x, (y1 if branch == 1 else y2)

    def in_minus_part(self, samples: int = 7) -> bool:
        """Complex conjugation maps the path onto itself with reversed orientation."""
        tol = mpmath.mpf(10) ** (-mp.dps // 2)
        for a, b, br, _ in self.segments:
            mid = (a + b) / 2
            for i in range(1, samples + 1):
                t = a + (b - a) * i / (samples + 1)
                x, y = self.point(t, br)
                xr, yr = self.point(2 * mid - t, br)
                if abs(mpmath.conj(x) - xr) > tol or abs(mpmath.conj(y) - yr) > tol * (1 + abs(y)):
                    return False
            if abs(mpmath.sin(mid)) > tol:
                return False
        return True

    def to_dict(self) -> dict:
        return {"k": mpmath.nstr(self.k, 20), "chart": self.chart, "kind": self.kind,
                "segments": [[mpmath.nstr(a, 20), mpmath.nstr(b, 20), br, o]
                             for a, b, br, o in self.segments]}


def path_for_k(k, chart: str) -> PathSpec:
    """Single loop when |2 cos(theta) + k| > 2 everywhere, else the two-arc cycle."""
    k = mpmath.mpf(mpmath.re(k))
    bd = branch_data(k)
    off = [(a, b) for a, b, kind in bd.intervals if kind == "off_circle"]
    pi = mp.pi
    if not bd.crossings:
        return PathSpec(k, chart, [(-pi, pi, 1, 1)])
    if len(off) == 1:
        a, b = off[0]
    else:
        # off-circle region wraps around theta = pi
        lo = [seg for seg in off if seg[0] <= -pi + mpmath.mpf(10) ** (-mp.dps // 2)]
        hi = [seg for seg in off if seg[1] >= pi - mpmath.mpf(10) ** (-mp.dps // 2)]
        a, b = hi[0][0], lo[0][1] + 2 * pi
    return PathSpec(k, chart, [(a, b, 1, 1), (a, b, 2, -1)])


def deninger_path(cid: str, side: str) -> PathSpec:
    case = load_case(cid)
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")
    return path_for_k(case.k if side == "plus" else case.k_conj, case.chart)


def _chart_c(chart: str):
    return mpmath.mpf(1) if chart == "plain" else mpmath.sqrt(2)


def chart_point(x, y, k, chart: str):
    """(X, Y) on the Weierstrass model from a point (x, y) of P_k = 0."""
    c2 = 1 if chart == "plain" else 2
    X = -mpmath.mpf(c2) / (x * y)
    if chart == "plain":
        Y = (y - x) * (1 + 1 / (x * y)) / (2 * x * y)
    else:
        Y = mpmath.sqrt(2) * (y - x) * (1 + 1 / (x * y)) / (x * y)
    return X, Y


def chart_inverse(X, Y, k, chart: str):
    """(x, y) on P_k = 0 from a point (X, Y) of the Weierstrass model."""
    if chart == "plain":
        den = 2 * X * (X - 1)
        return (k * X - 2 * Y) / den, (k * X + 2 * Y) / den
    den = X * (X - 2)
    r2 = mpmath.sqrt(2)
    return (k * X - r2 * Y) / den, (k * X + r2 * Y) / den


def omega_integrand(path: PathSpec, branch: int):
    """omega = dX/2Y = y dx / (c x (1 - y^2)) with x = e^{i theta}; c = 1 or sqrt 2."""
    c = _chart_c(path.chart)

    def f(t):
        # y/(1 - y^2) = -1/(y1 - y2) on branch 1 and 1/(y1 - y2) on branch 2
        y1, y2 = roots_y(mpmath.expj(t), path.k)
        diff = y1 - y2
        if diff == 0:
            return mpmath.mpc(0)
        return 1j * (-1 if branch == 1 else 1) / (c * diff)
    return f


def _integrate_complex(f, a, b, singular: bool, eps=None):
    re = adaptive_integrate(lambda t: mpmath.re(f(t)), a, b, eps, endpoint_singularity=singular)
    im = adaptive_integrate(lambda t: mpmath.im(f(t)), a, b, eps, endpoint_singularity=singular)
    return mpmath.mpc(re, im)


def _refined(path: PathSpec) -> PathSpec:
    # crossing angles recomputed at the current (raised) precision
    if path.kind == "loop":
        return path
    return path_for_k(path.k, path.chart)


def path_integral_omega(path: PathSpec, eps=None):
    """int_gamma omega.  On two-arc paths omega has inverse square-root endpoint
    behaviour, so the crossing angles and the quadrature run at doubled precision."""
    prec = mp.prec
    eps = mpmath.mpf(2) ** (8 - prec) if eps is None else mpmath.mpf(eps)
    total = mpmath.mpc(0)
    with mp.workprec(2 * prec if path.kind == "arcs" else prec + 20):
        p = _refined(path)
        singular = p.kind == "arcs"
        for a, b, br, o in p.segments:
            total += o * _integrate_complex(omega_integrand(p, br), a, b, singular, eps)
    return +total


# ---------------------------------------------------------------------------
# periods


def _eisenstein(tau, which: int):
    q = mpmath.expj(2 * mp.pi * tau)
    s = mpmath.mpc(0)
    n = 1
    qn = q
    e = 3 if which == 4 else 5
    while True:
        term = sum(dd ** e for dd in range(1, n + 1) if n % dd == 0) * qn
        s += term
        if abs(qn) * n ** (e + 1) < mpmath.mpf(2) ** (-mp.prec - 10):
            break
        qn *= q
        n += 1
    return 1 + (240 if which == 4 else -504) * s


def reduce_basis(w1, w2):
    """Lagrange-Gauss reduction of a lattice basis, Im(w2/w1) > 0."""
    if mpmath.im(w2 / w1) < 0:
        w2 = -w2
    for _ in range(1000):
        if abs(w2) < abs(w1):
            w1, w2 = w2, -w1
        m = mpmath.nint(mpmath.re(w2 / w1))
        if m == 0:
            break
        w2 = w2 - m * w1
    if mpmath.im(w2 / w1) < 0:
        w2 = -w2
    return w1, w2


def lattice_invariants(w1, w2):
    """(g2, g3) of Z w1 + Z w2 for the normalization y^2 = 4x^3 - g2 x - g3."""
    w1, w2 = reduce_basis(w1, w2)
    tau = w2 / w1
    s = 2 * mp.pi / w1
    return s ** 4 * _eisenstein(tau, 4) / 12, s ** 6 * _eisenstein(tau, 6) / 216


@dataclass
class Periods:
    w1: object
    w2: object
    imaginary: object

    def to_dict(self) -> dict:
        return {"w1": mpmath.nstr(self.w1, 20), "w2": mpmath.nstr(self.w2, 20),
                "imaginary_generator": mpmath.nstr(self.imaginary, 20)}


def fundamental_periods(curve: Curve, sign: int = 1) -> Periods:
    """Period basis of omega = dX/2Y by the complex AGM.

    Candidates pi/AGM(sqrt(e1-e3), sqrt(e1-e2)) and pi i/AGM(sqrt(e1-e3), sqrt(e2-e3))
    are tried over orderings of the 2-torsion roots; a candidate is accepted
    only if its lattice invariants reproduce g2, g3 of the curve.
    """
    a2, a4, a6 = curve.numeric(sign)
    es = mpmath.polyroots([1, a2, a4, a6], maxsteps=200, extraprec=2 * mp.prec)
    c4, c6 = (c.to_mp(sign) for c in curve.c4_c6())
    g2, g3 = c4 / 12, c6 / 216
    tol = mpmath.mpf(10) ** (-mp.dps // 2)
    for e1, e2, e3 in itertools.permutations(es):
        for s1, s2 in ((1, 1), (1, -1), (-1, 1)):
            try:
                A = mpmath.sqrt(e1 - e3)
                w1 = mp.pi / mpmath.agm(A, s1 * mpmath.sqrt(e1 - e2))
                w2 = 1j * mp.pi / mpmath.agm(A, s2 * mpmath.sqrt(e2 - e3))
            except (ZeroDivisionError, ValueError):
                continue
            if abs(mpmath.im(w2 / w1)) < tol:
                continue
            G2, G3 = lattice_invariants(w1, w2)
            if abs(G2 - g2) < tol * (1 + abs(g2)) and abs(G3 - g3) < tol * (1 + abs(g3)):
                b1, b2 = reduce_basis(w1, w2)
                return Periods(b1, b2, imaginary_generator(b1, b2))
    raise AGMBranchFailure("no AGM branch choice reproduces the lattice invariants")


def imaginary_generator(w1, w2, search: int = 6):
    """Generator of the purely imaginary sublattice, with positive imaginary part."""
    best = None
    tol = mpmath.mpf(10) ** (-mp.dps // 2) * (abs(w1) + abs(w2))
    for p in range(-search, search + 1):
        for q in range(-search, search + 1):
            if (p, q) == (0, 0):
                continue
            z = p * w1 + q * w2
            if abs(mpmath.re(z)) < tol and (best is None or abs(z) < abs(best)):
                best = z
    if best is None:
        raise AGMBranchFailure("lattice has no purely imaginary vector in the search box")
    return best if mpmath.im(best) > 0 else -best


# ---------------------------------------------------------------------------
# multipliers and regulator pairings


def _nearest_int(z, what: str, tol=1e-8) -> int:
    n = int(mpmath.nint(mpmath.re(z)))
    if abs(z - n) > tol:
        raise NotNearInteger(f"{what} = {mpmath.nstr(z, 15)} is not within {tol:g} of an integer")
    return n


def pushforward_multipliers(cid: str, integrals=None) -> dict:
    """phi_* gamma_E = a gamma_{E^sigma}, (phi^sigma)_* gamma_{E^sigma} = b gamma_E."""
    case = load_case(cid)
    if integrals is None:
        IE = path_integral_omega(deninger_path(cid, "plus"))
        IEs = path_integral_omega(deninger_path(cid, "minus"))
    else:
        IE, IEs = integrals
    c = case.multiplier.to_mp()
    cs = case.multiplier.conj().to_mp()
    a_raw = c * IE / IEs
    b_raw = cs * IEs / IE
    a = _nearest_int(a_raw, "a")
    b = _nearest_int(b_raw, "b")
    if abs(a * b) != case.degree:
        raise NotNearInteger(f"a b = {a * b} but the degree is {case.degree}")
    return {"a": a, "b": b, "a_residual": abs(a_raw - a), "b_residual": abs(b_raw - b),
            "ab": a * b, "expected_ab": case.composite_sign * case.degree}


def _symbol_terms(x, y, dx, dy, chart: str):
    """(log|a|, log|b|, Im(a'/a), Im(b'/b)) for M1 = {x, y} or {xy, x/y}."""
    u, v = dx / x, dy / y
    lx, ly = mpmath.log(abs(x)), mpmath.log(abs(y))
    if chart == "plain":
        return lx, ly, mpmath.im(u), mpmath.im(v)
    return lx + ly, lx - ly, mpmath.im(u + v), mpmath.im(u - v)


def _pullback_lift(case: "Case", side: str):
    """(x, y, x', y') on the domain chart -> the same data on the codomain chart.

    The chain runs through (X, Y), the isogeny and the inverse chart, with
    derivatives in closed form.  On the minus side phi^sigma is evaluated
    through the conjugate embedding.
    """
    sign = 1 if side == "plus" else -1
    k_cod = case.k_conj if side == "plus" else case.k
    phi = printed_isogeny(case)
    dxmap = phi.xmap.derivative()
    dymap = phi.ymap.derivative()
    a2, a4, a6 = case.E.numeric(sign)
    c1, c2 = (2, 1) if case.chart == "plain" else (1, 2)
    cy = 2 if case.chart == "plain" else mpmath.sqrt(2)

    def lift(x, y, dx, dy):
        X, Y = chart_point(x, y, None, case.chart)
        dX = -X * (dx / x + dy / y)
        dY = (3 * X * X + 2 * a2 * X + a4) * dX / (2 * Y)
        X2 = phi.xmap.eval_mp(X, sign)
        py = phi.ymap.eval_mp(X, sign)
        Y2 = Y * py
        dX2 = dxmap.eval_mp(X, sign) * dX
        dY2 = dY * py + Y * dymap.eval_mp(X, sign) * dX
        D = c1 * X2 * (X2 - c2)
        dD = c1 * (2 * X2 - c2) * dX2
        x2 = (k_cod * X2 - cy * Y2) / D
        y2 = (k_cod * X2 + cy * Y2) / D
        dx2 = (k_cod * dX2 - cy * dY2 - x2 * dD) / D
        dy2 = (k_cod * dX2 + cy * dY2 - y2 * dD) / D
        return x2, y2, dx2, dy2
    return lift


def _eta_integrand(path: PathSpec, branch: int, lift=None):
    """eta(a, b) / d theta = log|a| Im(b'/b) - log|b| Im(a'/a) along the path."""
    k = path.k

    def f(t):
        x, y = path.point(t, branch)
        s = x + 1 / x + k
        if 2 * y + s == 0:
            return mpmath.mpf(0)
        dx = 1j * x
        dy = -(1j * (x - 1 / x)) * y / (2 * y + s)
        if lift is not None:
            x, y, dx, dy = lift(x, y, dx, dy)
        la, lb, ia, ib = _symbol_terms(x, y, dx, dy, path.chart)
        return la * ib - lb * ia
    return f


OFFSET = 1e-20


def _ab(report: dict):
    return report["a"], report["b"]


def _closed_form_m1(path: PathSpec, m_value=None):
    # {x, y}: eta = -log|y| d theta;  {xy, x/y}: eta = 2 log|y| d theta
    m = mahler_jensen(path.k) if m_value is None else m_value
    weight = -1 if path.chart == "plain" else 2
    return weight * (1 if path.kind == "loop" else 2), m


def regulator_pairing(path: PathSpec, symbol: str = "M1", case: Optional[str] = None,
                      m_value=None, eps=None, multipliers=None) -> dict:
    """<gamma, M> by the direct eta line integral and by the Jensen closed form.

    M1 is {x, y} (plain) or {xy, x/y} (rotated).  M2 = phi^* M1 needs the case; its
    closed form is a <gamma_{E^sigma}, M1> on the plus side and b <gamma_E, M1>
    on the minus side, with (a, b) the pushforward multipliers.
    """
    if symbol not in ("M1", "M2"):
        raise ValueError(f"unknown symbol {symbol!r}")
    pulled = symbol == "M2"
    lift = None
    if pulled:
        if case is None:
            raise ValueError("M2 needs a case id")
        c = load_case(case)
        side = "plus" if abs(path.k - c.k) < abs(path.k - c.k_conj) else "minus"
    direct = mpmath.mpf(0)
    prec = mp.prec
    eps = mpmath.mpf(2) ** (8 - prec) if eps is None else mpmath.mpf(eps)
    # Pulled-back symbols can have zeros or poles on the path at real points
    # (theta = 0, pi and the arc ends).  Their tame symbols have absolute value
    # 1, so the pairing is the integral with those points removed.  Nodes stay
    # OFFSET away; near arc ends the integrand grows like log(t)/sqrt(t), so the
    # dropped piece is O(sqrt(OFFSET) |log OFFSET|), and the precision covers
    # the OFFSET^-4 cancellation in the pulled-back coordinates.
    offset = mpmath.mpf(OFFSET) if pulled else mpmath.mpf(0)
    work = 2 * prec if path.kind == "arcs" else prec + 20
    if pulled:
        work = max(work, prec + 4 * int(-mpmath.log(offset, 2)) + 40)
    with mp.workprec(work):
        if not pulled:
            p = _refined(path)
        else:
            # k at full working precision, so path points lie on the curve
            p = path_for_k(c.k if side == "plus" else c.k_conj, path.chart)
            lift = _pullback_lift(c, side)
        singular = p.kind == "arcs"
        for a, b, br, o in p.segments:
            # the segment midpoint (theta = 0 or pi) becomes a panel end
            mid = (a + b) / 2
            f = _eta_integrand(p, br, lift)
            if not offset:
                for lo, hi in ((a, mid), (mid, b)):
                    direct += o * adaptive_integrate(f, lo, hi, eps, endpoint_singularity=singular)
            elif not singular:
                for lo, hi in ((a, mid), (mid, b)):
                    direct += o * adaptive_integrate(f, lo + offset, hi - offset, eps)
            else:
                # t = end -+ u^2 turns log(t)/sqrt(t) at the arc ends into log(u)
                lo_u, hi_u = mpmath.sqrt(offset), mpmath.sqrt(mid - a - offset)
                direct += o * adaptive_integrate(lambda u: 2 * u * f(a + u * u), lo_u, hi_u, eps)
                direct += o * adaptive_integrate(lambda u: 2 * u * f(b - u * u), lo_u, hi_u, eps)
        direct /= 2 * mp.pi
    direct = +direct
    if symbol == "M1":
        mult, m = _closed_form_m1(path, m_value)
    else:
        other = deninger_path(case, "minus" if side == "plus" else "plus")
        a, b = multipliers if multipliers is not None else _ab(pushforward_multipliers(case))
        w, m = _closed_form_m1(other, m_value)
        mult = (a if side == "plus" else b) * w
    closed = mult * m
    return {"symbol": symbol, "direct": direct, "closed": closed, "difference": abs(direct - closed),
            "multiple_of_m": mult}


@dataclass
class RegulatorReport:
    case: str
    m_plus: object
    m_minus: object
    pairing: List[List[object]]
    multipliers: Tuple[int, int]
    R: object
    L_values: Dict[str, object]
    L_side: object
    residual: object
    constant: int
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self, full: bool = False) -> dict:
        out = {"case": self.case, "m_plus": mpmath.nstr(self.m_plus, 25),
               "m_minus": mpmath.nstr(self.m_minus, 25),
               "pairing": [[mpmath.nstr(v, 20) for v in row] for row in self.pairing],
               "multipliers": list(self.multipliers), "R": mpmath.nstr(self.R, 25),
               "constant": self.constant,
               "L_values": {k: mpmath.nstr(v, 25) for k, v in self.L_values.items()},
               "L_side": mpmath.nstr(self.L_side, 25), "residual": mpmath.nstr(self.residual, 5)}
        if full:
            out["details"] = {k: (mpmath.nstr(v, 20) if isinstance(v, (mpmath.mpf, mpmath.mpc)) else v)
                              for k, v in self.details.items()}
        return out


def l_side(cid: str, eps=1e-13, beta2_override: Optional[QuadFieldElem] = None):
    """const/pi^4 L(f, 2) L(g, 2) together with the L-values used."""
    case = load_case(cid)
    pi4 = mp.pi ** 4
    if cid == "6":
        L64, L32 = lvalue2(F64, eps), lvalue2(F32, eps)
        return case.constant / pi4 * L64 * L32, {"L(f64,2)": L64, "L(f32,2)": L32}
    rel = PAIR_RELATIONS[cid]
    Lp = lvalue2(find_row(rel.plus).form, eps)
    Lm = lvalue2(find_row(rel.minus).form, eps)
    rel_minus = rel.rel_minus
    if beta2_override is not None:
        rel_minus = (rel_minus[0], (beta2_override, rel_minus[1][1]))
    alpha = effective_coefficient(rel.rel_plus).to_mp()
    beta = effective_coefficient(rel_minus).to_mp()
    Lf, Lg = extract_conjugate_pair(Lp, Lm, alpha, beta, tol=mpmath.mpf(eps) * 100)
    prod = Lf * Lg
    return case.constant / pi4 * mpmath.re(prod), {"L(theta+,2)": Lp, "L(theta-,2)": Lm,
                                                   "L(f,2)": Lf, "L(g,2)": Lg}


def regulator_case(cid: str, eps=1e-13, dps: int = 40, with_direct: bool = True,
                   full_matrix: bool = False) -> RegulatorReport:
    """Pairing matrix [[<gE,M1>, <gEs,M1>], [a <gEs,M1>, b <gE,M1>]], R = |det| and
    the L-side const/pi^4 L(f,2) L(g,2).

    with_direct adds the direct eta line integrals of the first row; full_matrix
    also integrates M2 = phi^* M1 directly along both paths.
    """
    with mp.workdps(dps):
        case = load_case(cid)
        m_plus = mahler_jensen(case.k)
        m_minus = mahler_jensen(case.k_conj)
        gE, gEs = deninger_path(cid, "plus"), deninger_path(cid, "minus")
        IE, IEs = path_integral_omega(gE), path_integral_omega(gEs)
        mult = pushforward_multipliers(cid, (IE, IEs))
        a, b = mult["a"], mult["b"]
        p11 = _closed_form_m1(gE)[0] * m_plus
        p12 = _closed_form_m1(gEs)[0] * m_minus
        pairing = [[p11, p12], [a * p12, b * p11]]
        R = abs(pairing[0][0] * pairing[1][1] - pairing[0][1] * pairing[1][0])
        Lside, Lvals = l_side(cid, eps)
        details = {"integral_gamma_E": IE, "integral_gamma_Es": IEs,
                   "a_residual": mult["a_residual"], "b_residual": mult["b_residual"],
                   "path_E": gE.kind, "path_Es": gEs.kind}
        if with_direct or full_matrix:
            pE = regulator_pairing(gE, "M1", m_value=m_plus, eps=1e-15)
            pEs = regulator_pairing(gEs, "M1", m_value=m_minus, eps=1e-15)
            details.update({"direct_E": pE["direct"], "direct_Es": pEs["direct"],
                            "direct_difference": max(pE["difference"], pEs["difference"])})
        if full_matrix:
            qE = regulator_pairing(gE, "M2", cid, m_value=m_minus, eps=1e-12, multipliers=(a, b))
            qEs = regulator_pairing(gEs, "M2", cid, m_value=m_plus, eps=1e-12, multipliers=(a, b))
            details.update({"direct_M2_E": qE["direct"], "direct_M2_Es": qEs["direct"],
                            "direct_M2_difference": max(qE["difference"], qEs["difference"])})
        return RegulatorReport(cid, m_plus, m_minus, pairing, (a, b), R, Lvals, Lside,
                               abs(R - Lside), case.constant, details)


def conjugate_pairing(report: RegulatorReport) -> List[List[object]]:
    """Pairing matrix of the sigma-conjugate case: E and E^sigma swap roles, so
    m+ <-> m-, (a, b) -> (b, a) and the path weights follow their curves."""
    (p11, p12), (p21, p22) = report.pairing
    a, b = report.multipliers
    return [[p12, p11], [b * p11, a * p12]]


def regulator_from_matrix(matrix) -> object:
    (p11, p12), (p21, p22) = matrix
    return abs(p11 * p22 - p12 * p21)
