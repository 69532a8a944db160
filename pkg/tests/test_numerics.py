import mpmath
import pytest
from mpmath import mp

from mahlercm.errors import NoConvergence
from mahlercm.numerics import (IntPolynomial, adaptive_integrate, from_decimal_string, integer_relation,
                               lll_reduce, to_decimal_string)


def test_integer_relation_rational_and_quadratic():
    assert integer_relation(mpmath.mpf("0.5"), 2).coeffs == (-1, 2)
    assert integer_relation(mpmath.mpf(-1), 2).coeffs == (1, 1)
    lam = 17 - 12 * mpmath.sqrt(2)
    p = integer_relation(lam, 4)
    assert p.coeffs == (1, -34, 1)
    # exact oracle: (x - 17 + 12 sqrt2)(x - 17 - 12 sqrt2) = x^2 - 34 x + (289 - 288)
    assert (17 ** 2 - 2 * 12 ** 2) == p.coeffs[0]


def test_integer_relation_against_findpoly():
    x = mpmath.cbrt(2) + 1
    p = integer_relation(x, 3, 16)
    ref = mpmath.findpoly(x, 3, maxcoeff=1000)
    assert list(reversed(p.coeffs)) in (ref, [-c for c in ref])


def test_integer_relation_transcendental_none():
    assert integer_relation(mp.pi, 3, 16) is None


def test_int_polynomial_normalization():
    p = IntPolynomial((1, -34, 1, 0, 0))
    assert p.degree == 2
    assert str(p) == "x^2 - 34x + 1"


def test_lll_reduces_known_basis():
    red = lll_reduce([[1, 0, 0, 1000], [0, 1, 0, 2000], [0, 0, 1, 2999]])
    assert min(sum(v * v for v in row) for row in red) <= 6


def test_adaptive_integrate_closed_forms():
    assert abs(adaptive_integrate(lambda t: 4 / (1 + t * t), 0, 1, 1e-40) - mp.pi) < 1e-40
    v = adaptive_integrate(lambda t: 1 / mpmath.sqrt(t), 0, 1, 1e-30, endpoint_singularity=True)
    assert abs(v - 2) < 1e-30


def test_adaptive_integrate_log_integrand_against_riemann():
    # log|2 cos t + 102| has no singularity; a midpoint sum at 4000 nodes is the oracle
    f = lambda t: mpmath.log(abs(2 * mpmath.cos(t) + 102))
    v = adaptive_integrate(f, 0, 2 * mp.pi, 1e-20) / (2 * mp.pi)
    n = 4000
    h = 2 * mp.pi / n
    ref = sum(f((j + 0.5) * h) for j in range(n)) * h / (2 * mp.pi)
    assert abs(v - ref) < 1e-12
    assert abs(v - mpmath.log(100)) < 0.03


def test_adaptive_integrate_raises_when_unreachable():
    with pytest.raises(NoConvergence):
        adaptive_integrate(lambda t: mpmath.sin(1 / t) if t else 0, 0, 1, 1e-60, max_level=4)


def test_decimal_round_trip():
    x = mp.pi
    s = to_decimal_string(x)
    assert abs(from_decimal_string(s) - x) <= mpmath.mpf(2) ** (2 - mp.prec) * abs(x)
