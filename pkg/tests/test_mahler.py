import mpmath
import numpy as np
import pytest
from mpmath import mp

from mahlercm.errors import DomainError, StrategyPrecisionExceeded
from mahlercm.mahler import DIRECT_EPS_FLOOR, branch_data, mahler_jensen, mahler_lattice, roots_y


def torus_oracle(k, n=1000):
    """Midpoint sum of log|P_k| over the unit torus (float64)."""
    t = (np.arange(n) + 0.5) * 2 * np.pi / n
    x = np.exp(1j * t)[:, None]
    y = np.exp(1j * t)[None, :]
    return float(np.mean(np.log(np.abs(x + 1 / x + y + 1 / y + complex(k)))))


def test_roots_examples():
    y1, y2 = roots_y(1j, 0)
    assert abs(abs(y1) - 1) < 1e-60 and abs(abs(y2) - 1) < 1e-60
    k = 12 + 8 * mpmath.sqrt(2)
    y1, _ = roots_y(1, k)
    assert abs(mpmath.im(y1)) < 1e-60 and abs(y1) > 1
    k = 12 - 8 * mpmath.sqrt(2)
    theta0 = mpmath.atan(2 * mpmath.sqrt(2 + 10 * mpmath.sqrt(2)) / 7)
    y1, y2 = roots_y(mpmath.expj(theta0), k)
    assert abs(y1 - y2) < 1e-30


def test_roots_rejects_zero():
    with pytest.raises(DomainError):
        roots_y(0, 1)


def test_branch_data_crossings():
    k = 12 - 8 * mpmath.sqrt(2)
    bd = branch_data(k)
    theta0 = mpmath.atan(2 * mpmath.sqrt(2 + 10 * mpmath.sqrt(2)) / 7)
    assert len(bd.crossings) == 2 and abs(bd.crossings[1] - theta0) < 1e-60
    for c in bd.crossings:
        assert abs(abs(2 * mpmath.cos(c) + k) - 2) < 1e-60
    assert branch_data(12 + 8 * mpmath.sqrt(2)).crossings == []
    assert branch_data(4j).intervals[0][2] == "off_circle"


def test_jensen_simple_values():
    assert mahler_jensen(0) == 0
    m100 = mahler_jensen(100)
    assert abs(m100 - torus_oracle(100)) < 1e-12
    # large-k expansion log k - 2/k^2 - 9/k^4
    assert abs(m100 - (mpmath.log(100) - 2e-4 - 9e-8)) < 1e-9


@pytest.mark.parametrize("k", [1, 3, 8, 4j])
def test_jensen_against_torus(k):
    assert abs(mahler_jensen(k, 1e-20) - torus_oracle(k)) < 2e-4


def test_jensen_near_real_k_is_split_at_crossings():
    k = mpmath.mpc(2 * mpmath.sqrt(2), mpmath.mpf(10) ** -60)
    assert abs(mahler_jensen(k, 1e-20) - mahler_jensen(2 * mpmath.sqrt(2), 1e-20)) < 1e-20


def test_lattice_direct_cross_method():
    r2 = mpmath.sqrt(2)
    assert abs(mahler_lattice(1j, 1e-3, "direct") - mahler_jensen(12 + 8 * r2)) < 1e-3
    assert abs(mahler_lattice(mpmath.mpc(2, 1) / 5, 1e-3, "direct") - mahler_jensen(12 - 8 * r2)) < 1e-3
    v = mahler_lattice(mpmath.mpc(1, 1) / 2, 1e-6, "direct")
    assert abs(v - mahler_jensen(4j)) < 1e-6
    assert abs(mahler_jensen(-4j) - mahler_jensen(4j)) < 1e-60


def test_lattice_accelerated_high_precision():
    v = mahler_lattice(1j)
    assert abs(v - mahler_jensen(12 + 8 * mpmath.sqrt(2))) < mpmath.mpf(10) ** -60


def test_direct_floor():
    with pytest.raises(StrategyPrecisionExceeded):
        mahler_lattice(1j, DIRECT_EPS_FLOOR / 10, "direct")


def test_lattice_rejects_tau_outside_domain():
    with pytest.raises(DomainError):
        mahler_lattice(mpmath.mpc(3, 1))
