import mpmath
import pytest
from mpmath import mp

from mahlercm.errors import DomainError
from mahlercm.modular import eta_numeric, j_numeric, k_from_tau, lambda2, weber_f, weber_f1, weber_f2

TOL = mpmath.mpf(10) ** -60


def eta_product(tau, terms=400):
    q = mpmath.exp(2j * mp.pi * tau)
    p = mpmath.mpf(1)
    for n in range(1, terms):
        p *= 1 - q ** n
    return mpmath.exp(2j * mp.pi * tau / 24) * p


def test_eta_at_i():
    v = eta_numeric(1j)
    assert abs(v - mpmath.gamma(0.25) / (2 * mp.pi ** 0.75)) < TOL
    assert abs(v - eta_product(mpmath.mpc(0, 1))) < 1e-20


def test_eta_transformation_laws():
    tau = mpmath.mpc("0.3", "0.8")
    assert abs(eta_numeric(tau + 1) - mpmath.expj(mp.pi / 12) * eta_numeric(tau)) < TOL
    tau = mpmath.mpc("0.2", "1.1")
    assert abs(eta_numeric(-1 / tau) - mpmath.sqrt(-1j * tau) * eta_numeric(tau)) < TOL


def test_eta_small_imaginary_part_reduced():
    tau = mpmath.mpc("0.37", "0.002")
    assert abs(eta_numeric(-1 / tau) - mpmath.sqrt(-1j * tau) * eta_numeric(tau)) < 1e-40


def test_eta_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        eta_numeric(mpmath.mpc(0, -1))


def test_lambda_spot_values():
    r2 = mpmath.sqrt(2)
    assert abs(lambda2(1j) - (17 - 12 * r2)) < TOL
    assert abs(lambda2(mpmath.mpc(1, 1) / 2) + 1) < TOL
    assert abs(lambda2(mpmath.mpc(2, 1) / 5) - (17 + 12 * r2)) < TOL


def test_j_values():
    assert abs(j_numeric(1j) - 1728) < TOL * 1728
    assert abs(j_numeric(2j) - 287496) < TOL * 287496
    assert abs(j_numeric((1 + 1j * mpmath.sqrt(3)) / 2)) < 1e-50


def test_weber_values_at_2i():
    r2 = mpmath.sqrt(2)
    assert abs(weber_f1(2j) ** 24 - 512) < 1e-40 * 512
    # the displayed -280 + 192 sqrt2 is negative; f2(2i) > 0 forces -280 + 198 sqrt2
    assert abs(weber_f2(2j) ** 24 - (-280 + 198 * r2)) < 1e-40
    tau = mpmath.mpc("0.1", "1.3")
    assert abs(weber_f(tau) * weber_f1(tau) * weber_f2(tau) - r2) < TOL


def test_k_from_tau():
    r2 = mpmath.sqrt(2)
    assert abs(k_from_tau(1j) - (12 + 8 * r2)) < TOL
    assert abs(k_from_tau(mpmath.mpc(2, 1) / 5) - (12 - 8 * r2)) < TOL
    assert abs(k_from_tau(mpmath.mpc(0, 1) / mpmath.sqrt(2)) - (4 + 4 * r2)) < TOL
    # principal branch: lambda = -1 gives 4/sqrt(-1) = -4i
    assert abs(k_from_tau(mpmath.mpc(1, 1) / 2) + 4j) < TOL
