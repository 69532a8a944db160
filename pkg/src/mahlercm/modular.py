"""Modular functions on the upper half-plane: eta, lambda(2 tau), j, the
Weber functions, and the map tau -> k = 4/sqrt(lambda(2 tau))."""

from __future__ import annotations

import mpmath
from mpmath import mp

from .errors import DomainError, PrecisionLoss

IM_FLOOR = mpmath.mpf("1e-3")
MAX_REDUCTION_STEPS = 10_000


def _as_tau(tau):
    tau = mpmath.mpc(tau)
    if tau.imag <= 0:
        raise DomainError(f"tau = {tau} is not in the upper half-plane")
    return tau


def reduce_with_eta_factor(tau):
    """Move tau into the standard fundamental domain.

    Returns (tau', factor) with eta(tau) = factor * eta(tau').
    """
    factor = mpmath.mpc(1)
    for _ in range(MAX_REDUCTION_STEPS):
        n = int(mpmath.nint(tau.real))
        if n:
            tau = tau - n
            factor *= mpmath.expjpi(mpmath.mpf(n) / 12)
        if abs(tau) < 1 and not mpmath.almosteq(abs(tau), 1, 2 ** (-mp.prec + 8)):
            # eta(tau) = eta(-1/tau) / sqrt(-i tau)
            factor /= mpmath.sqrt(-1j * tau)
            tau = -1 / tau
        else:
            return tau, factor
    raise PrecisionLoss("fundamental-domain reduction did not terminate")


def _eta_series(tau):
    """q^(1/24) sum_k (-1)^k q^(k(3k-1)/2), for Im tau bounded below."""
    q = mpmath.expjpi(2 * tau)
    target = mpmath.mpf(2) ** (-mp.prec - 8)
    s = mpmath.mpc(1)
    k = 1
    aq = abs(q)
    while True:
        e1 = k * (3 * k - 1) // 2
        if aq ** e1 < target:
            break
        e2 = k * (3 * k + 1) // 2
        sign = -1 if k % 2 else 1
        s += sign * (q ** e1 + q ** e2)
        k += 1
    return mpmath.expjpi(tau / 12) * s


def eta_numeric(tau, floor=IM_FLOOR):
    """Dedekind eta at tau; the reduced point must satisfy Im >= floor."""
    tau = _as_tau(tau)
    with mp.workprec(mp.prec + 24):
        t, factor = reduce_with_eta_factor(tau)
        if t.imag < floor:
            raise PrecisionLoss(f"Im(tau) = {mpmath.nstr(t.imag, 5)} below floor after reduction")
        val = factor * _eta_series(t)
    return +val


def lambda2(tau):
    """lambda(2 tau) = 16 eta(tau)^8 eta(4 tau)^16 / eta(2 tau)^24."""
    tau = _as_tau(tau)
    with mp.workprec(mp.prec + 32):
        e1 = eta_numeric(tau)
        e2 = eta_numeric(2 * tau)
        e4 = eta_numeric(4 * tau)
        val = 16 * e1 ** 8 * e4 ** 16 / e2 ** 24
    return +val


def _e4(tau):
    q = mpmath.expjpi(2 * tau)
    target = mpmath.mpf(2) ** (-mp.prec - 8)
    s = mpmath.mpc(0)
    qn = mpmath.mpc(1)
    n = 1
    while True:
        qn *= q
        term = n ** 3 * qn / (1 - qn)
        s += term
        if abs(qn) * n ** 3 < target:
            break
        n += 1
    return 1 + 240 * s


def j_numeric(tau):
    """Klein's j = E4^3 / eta^24, evaluated at the reduced point."""
    tau = _as_tau(tau)
    with mp.workprec(mp.prec + 24):
        t, _ = reduce_with_eta_factor(tau)
        val = _e4(t) ** 3 / _eta_series(t) ** 24
    return +val


def weber_f(tau):
    tau = _as_tau(tau)
    with mp.workprec(mp.prec + 16):
        val = mpmath.expjpi(mpmath.mpf(-1) / 24) * eta_numeric((tau + 1) / 2) / eta_numeric(tau)
    return +val


def weber_f1(tau):
    tau = _as_tau(tau)
    with mp.workprec(mp.prec + 16):
        val = eta_numeric(tau / 2) / eta_numeric(tau)
    return +val


def weber_f2(tau):
    tau = _as_tau(tau)
    with mp.workprec(mp.prec + 16):
        val = mpmath.sqrt(2) * eta_numeric(2 * tau) / eta_numeric(tau)
    return +val


def k_from_tau(tau):
    """k = 4 / sqrt(lambda(2 tau)) on the principal square-root branch."""
    with mp.workprec(mp.prec + 16):
        lam = lambda2(tau)
        if abs(lam) < mpmath.mpf(2) ** (-mp.prec + 16):
            raise DomainError("lambda(2 tau) vanishes to working precision")
        val = 4 / mpmath.sqrt(lam)
    return +val


def chop(z, tol=None):
    """Drop a negligible imaginary part (relative to |z|)."""
    z = mpmath.mpmathify(z)
    tol = tol if tol is not None else mpmath.mpf(2) ** (-mp.prec + 16)
    if isinstance(z, mpmath.mpc) and abs(z.imag) <= tol * max(1, abs(z)):
        return +z.real
    return z
