"""Mahler measure of P_k = x + 1/x + y + 1/y + k.

Two routes: Jensen's formula reduces m(k) to a one-variable integral over
the unit circle, and the Kronecker-Eisenstein lattice sum expresses it
through a CM point tau with k = 4 / sqrt(lambda(2 tau)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import mpmath
import numpy as np
from mpmath import mp

from .errors import DomainError, StrategyPrecisionExceeded
from .numerics import adaptive_integrate
from .quadforms import in_Fprime

DIRECT_EPS_FLOOR = 1e-11


def roots_y(x, k):
    """Roots of y^2 + (x + 1/x + k) y + 1 = 0 ordered |y1| >= |y2|."""
    x = mpmath.mpmathify(x)
    if x == 0:
        raise DomainError("x must be nonzero")
    s = x + 1 / x + k
    r = mpmath.sqrt(s * s - 4)
    ya = (-s + r) / 2
    yb = (-s - r) / 2
    y1 = ya if abs(ya) >= abs(yb) else yb
    return y1, 1 / y1


@dataclass
class BranchData:
    """Where on |x| = 1 the roots y1, y2 leave the unit circle.

    ``intervals`` lists (theta_a, theta_b, kind) covering [-pi, pi] with kind
    'off_circle' (|y1| > 1) or 'on_circle' (|y1| = |y2| = 1).
    """

    k: mpmath.mpc
    crossings: List = field(default_factory=list)
    intervals: List[Tuple] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"k": [mpmath.nstr(mpmath.re(self.k), 20), mpmath.nstr(mpmath.im(self.k), 20)],
                "crossings": [mpmath.nstr(c, 20) for c in self.crossings],
                "intervals": [[mpmath.nstr(a, 20), mpmath.nstr(b, 20), kind]
                              for a, b, kind in self.intervals]}


def _real_part_if_real(k):
    """k with a negligible imaginary part (rounding noise from k_from_tau) is real."""
    k = mpmath.mpmathify(k)
    if abs(mpmath.im(k)) <= mpmath.mpf(2) ** (16 - mp.prec) * max(1, abs(k)):
        return mpmath.re(k)
    return k


def branch_data(k) -> BranchData:
    """Crossing angles: the solutions of |2 cos(theta) + k| = 2 with k real.

    For non-real k the roots never meet the unit circle.
    """
    k = _real_part_if_real(k)
    pi = mp.pi
    if isinstance(k, mpmath.mpc):
        return BranchData(k, [], [(-pi, pi, "off_circle")])
    kr = mpmath.re(k)
    # |s| <= 2 exactly on  -2 - k <= 2 cos(theta) <= 2 - k
    lo = (-2 - kr) / 2
    hi = (2 - kr) / 2
    pts = set()
    for c in (lo, hi):
        if -1 < c < 1:
            pts.add(mpmath.acos(c))
    pos = sorted(pts)
    cuts = [mpmath.mpf(0)] + pos + [pi]
    half = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = mpmath.cos((a + b) / 2)
        kind = "on_circle" if lo <= mid <= hi else "off_circle"
        half.append((a, b, kind))
    intervals = [(-b, -a, kind) for a, b, kind in reversed(half)] + half
    merged = []
    for a, b, kind in intervals:
        if merged and merged[-1][2] == kind and merged[-1][1] == a:
            merged[-1] = (merged[-1][0], b, kind)
        else:
            merged.append((a, b, kind))
    crossings = sorted([-c for c in pos] + pos)
    return BranchData(mpmath.mpc(k), crossings, merged)


def _log_y1(theta, k):
    x = mpmath.expj(theta)
    y1, _ = roots_y(x, k)
    return max(mpmath.log(abs(y1)), mpmath.mpf(0))


def mahler_jensen(k, eps=None):
    """m(P_k) = (1/2 pi) int_0^{2 pi} log max(|y1(e^{i theta})|, 1) d theta.

    The integrand is even in theta, so [0, pi] is integrated and panels are
    split at the crossing angles, where it has square-root behaviour.
    """
    prec = mp.prec
    eps = mpmath.mpf(2) ** (8 - prec) if eps is None else mpmath.mpf(eps)
    k = _real_part_if_real(k)
    with mp.workprec(prec + 32):
        bd = branch_data(k)
        total = mpmath.mpf(0)
        panels = [(a, b, kind) for a, b, kind in bd.intervals if b > 0]
        sing = bool(bd.crossings)
        if isinstance(k, mpmath.mpc):
            # nearly real k: the integrand is smooth but sharply bent at the
            # crossings of Re k, so those become panel ends too
            cuts = [c for c in branch_data(mpmath.re(k)).crossings if c > 0]
            if cuts:
                edges = [mpmath.mpf(0)] + cuts + [mp.pi]
                panels = [(a, b, "off_circle") for a, b in zip(edges[:-1], edges[1:])]
                sing = True
        for a, b, kind in panels:
            a = max(a, mpmath.mpf(0))
            if kind == "on_circle" or b <= a:
                continue
            total += adaptive_integrate(lambda t: _log_y1(t, k), a, b,
                                        eps=eps * mp.pi / 4, endpoint_singularity=sing)
        val = total / mp.pi
    return +val


# ---------------------------------------------------------------------------
# lattice sum


def _lattice_prefactor(tau):
    return 16 * mpmath.im(tau) / mp.pi ** 2


def _row_direct_numpy(X: float, Y: float, N: int) -> complex:
    """sum_{|n| <= N} chi(n) (n + X - iY) / ((n + X)^2 + Y^2)^2, odd n only."""
    n = np.arange(-N, N + 1, dtype=np.float64)
    odd = (np.arange(-N, N + 1) % 2) != 0
    n = n[odd]
    chi = np.where((np.arange(-N, N + 1)[odd] % 4) == 1, 1.0, -1.0)
    u = n + X
    den = (u * u + Y * Y) ** 2
    re = np.sum(chi * u / den)
    im = -Y * np.sum(chi / den)
    return complex(re, im)


def _check_tau(tau):
    tau = mpmath.mpc(tau)
    if not in_Fprime(tau, tol=mpmath.mpf(10) ** -20):
        raise DomainError(f"tau = {tau} is not in F'")
    return tau


def mahler_lattice(tau, eps=None, strategy: str = "accelerated"):
    """Re(16 Im(tau)/pi^2 sum' chi(n) (4 m conj(tau) + n) / |4 m tau + n|^4)."""
    tau = _check_tau(tau)
    if strategy == "direct":
        return _lattice_direct(tau, 1e-6 if eps is None else float(eps))
    if strategy == "accelerated":
        return _lattice_accelerated(tau, eps)
    raise ValueError(f"unknown strategy {strategy!r}")


def _lattice_direct(tau, eps: float):
    """Row-by-row float64 summation.

    The m = 0 row is pi^3/16 (twice L(chi_-4, 3)).  Row m has odd n with
    |n| <= N, where the absolute tail 2 sum_{|u| > N'} u^-3 <= 2/N'^2 sets N
    from eps; rows decay like exp(-2 pi |m| Im tau) and stop once three
    consecutive rows fall below the per-row budget.
    """
    if eps < DIRECT_EPS_FLOOR:
        raise StrategyPrecisionExceeded(
            f"direct lattice sum is float64-based; eps={eps:g} below floor {DIRECT_EPS_FLOOR:g}")
    x = float(mpmath.re(tau))
    y = float(mpmath.im(tau))
    pref = 16 * y / np.pi ** 2
    budget = eps / (4 * pref)
    max_rows = int(np.ceil(np.log(64 / budget) / (2 * np.pi * y))) + 3
    per_row = budget / max_rows
    total = complex(np.pi ** 3 / 16, 0.0)
    quiet = 0
    for m in range(1, max_rows + 1):
        row = 0j
        for sgn in (1, -1):
            X, Y = 4 * sgn * m * x, 4 * sgn * m * y
            N = int(np.ceil(abs(X) + np.sqrt(2 / per_row))) + 1
            row += _row_direct_numpy(X, Y, N)
        total += row
        quiet = quiet + 1 if abs(row) < per_row else 0
        if quiet >= 3:
            break
    return pref * total.real


def _row_poisson(X, Y, eps):
    """Row sum_n chi(n) g(n + X), g(v) = (v - iY)/(v^2 + Y^2)^2, by Poisson.

    With a = |Y| the Fourier transforms are
      FT[(v^2+a^2)^-2](xi) = pi/(2a^3) (1 + 2 pi |xi| a) e^{-2 pi |xi| a},
      FT[v (v^2+a^2)^-2](xi) = -i pi^2 xi / a e^{-2 pi |xi| a},
    and the odd character picks out xi = k/4 with k odd:
      row = (i/2) sum_{k odd} chi_-4(k) e^{2 pi i k X/4} G(k/4).
    """
    a = abs(Y)
    pi = mp.pi
    total = mpmath.mpc(0)
    k = 1
    while True:
        xi = mpmath.mpf(k) / 4
        decay = mpmath.exp(-2 * pi * xi * a)
        if decay * (1 + 2 * pi * xi * a) * (pi ** 2 * xi / a + pi / (2 * a * a)) < eps:
            break
        for kk in (k, -k):
            xs = mpmath.mpf(kk) / 4
            chi = 1 if kk % 4 == 1 else -1
            G = (-1j * pi ** 2 * xs / a - 1j * Y * pi / (2 * a ** 3) * (1 + 2 * pi * abs(xs) * a)) * decay
            total += chi * mpmath.expj(2 * pi * xs * X) * G
        k += 2
    return 1j * total / 2


def _lattice_accelerated(tau, eps=None):
    """Exponentially convergent evaluation at working precision.

    Each row m != 0 is summed over n by Poisson summation (see _row_poisson);
    row m then decays like exp(-2 pi |m| Im tau).
    """
    prec = mp.prec
    eps = mpmath.mpf(2) ** (8 - prec) if eps is None else mpmath.mpf(eps)
    with mp.workprec(prec + 32):
        x, y = mpmath.re(tau), mpmath.im(tau)
        pref = _lattice_prefactor(tau)
        target = eps / (8 * pref)
        total = mpmath.mpc(mp.pi ** 3 / 16)
        m = 1
        while True:
            row = mpmath.mpc(0)
            for sgn in (1, -1):
                row += _row_poisson(4 * sgn * m * x, 4 * sgn * m * y, target / 4)
            total += row
            # a priori bound on rows beyond m; |row| itself can cancel
            r = mpmath.exp(-2 * mp.pi * y)
            a = 4 * (m + 1) * y
            head = (mp.pi ** 2 / (4 * a) + mp.pi / (2 * a * a)) * (1 + mp.pi * a / 2)
            if 4 * head * mpmath.exp(-mp.pi * a / 2) / (1 - r) ** 2 < target:
                break
            m += 1
        val = pref * mpmath.re(total)
    return +val


def mahler_from_tau(tau, eps=None):
    return mahler_lattice(tau, eps, "accelerated")
