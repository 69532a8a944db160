from fractions import Fraction

import pytest

from mahlercm.errors import TruncationTooShort
from mahlercm.qseries import (EtaQuotient, PowerSeriesZ, ThetaSpec, eta_expansion, eta_quotient_expansion,
                              eta_quotient_modularity, gamma0_index, sturm_bound, sturm_compare,
                              theta_expansion)


def brute_product(n):
    """Coefficients of prod_{k<=n} (1 - q^k) up to q^n."""
    c = [1] + [0] * n
    for k in range(1, n + 1):
        for e in range(n, k - 1, -1):
            c[e] -= c[e - k]
    return c


def terms(series):
    return {e: int(c) for e, c in series.nonzero_terms()}


def test_eta_expansion_pentagonal():
    eta = eta_expansion(13)
    assert eta.base == Fraction(1, 24)
    assert terms(eta) == {Fraction(1, 24) + e: c for e, c in
                          {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1}.items()}


def test_eta_expansion_against_product():
    ref = brute_product(200)
    eta = eta_expansion(201)
    assert [int(c) for c in eta.coeffs[:201]] == ref
    # 15 = k(3k - 1)/2 at k = -3, so the sign is (-1)^3
    assert ref[15] == -1 and ref[3] == 0


def test_lambda_quotient():
    lam = eta_quotient_expansion(EtaQuotient(((1, 8), (2, -24), (4, 16))), 5)
    assert terms(16 * lam) == {1: 16, 2: -128, 3: 704, 4: -3072, 5: 16 * 718}


def test_f64_f32_expansions():
    f64 = eta_quotient_expansion(EtaQuotient(((4, -2), (8, 8), (16, -2))), 26)
    f32 = eta_quotient_expansion(EtaQuotient(((4, 2), (8, 2))), 26)
    assert terms(f64) == {1: 1, 5: 2, 9: -3, 13: -6, 17: 2, 25: -1}
    assert terms(f32) == {1: 1, 5: -2, 9: -3, 13: 6, 17: 2, 25: -1}


def test_modularity():
    m = eta_quotient_modularity(EtaQuotient(((1, 8), (2, -24), (4, 16))))
    assert (m.weight, m.level) == (0, 4)
    m = eta_quotient_modularity(EtaQuotient(((4, 2), (8, 2))))
    assert (m.weight, m.level) == (2, 32)
    assert eta_quotient_modularity(EtaQuotient(((1, 1),))) is None


def test_theta_expansions_printed():
    t1 = theta_expansion(ThetaSpec(16, 0, 1, 0, 1, Fraction(1, 2)), 50)
    assert terms(t1) == {1: 1, 9: -3, 17: 2, 25: -1, 41: 10, 49: -7}
    t2 = theta_expansion(ThetaSpec(16, 16, 5, 8, 5, Fraction(1, 4)), 62)
    assert terms(t2) == {5: 1, 13: -3, 29: 5, 37: 1, 45: -3, 53: -7, 61: 5}
    g = theta_expansion(ThetaSpec(2, 0, 1, 0, 1, Fraction(1, 4), "n", (("m", 2, 1), ("n", 2, 1))), 44)
    assert terms(g) == {3: 1, 11: -3, 19: 1, 27: 2, 43: 5}
    f = theta_expansion(ThetaSpec(1, -1, 1, 1, -2, Fraction(-1, 6)), 20)
    assert terms(f) == {1: 1, 3: 1, 7: -2, 9: -3, 13: -2, 19: 2}


def test_theta_rejects_indefinite():
    with pytest.raises(ValueError):
        ThetaSpec(1, 3, 1)


def test_sturm_bound():
    assert sturm_bound(64, 2) == 16
    assert sturm_bound(32, 2) == 8
    assert sturm_bound(1, 12) == 1
    assert gamma0_index(64) == 96


def test_sturm_compare_identities():
    f64 = eta_quotient_expansion(EtaQuotient(((4, -2), (8, 8), (16, -2))), 40)
    f32 = eta_quotient_expansion(EtaQuotient(((4, 2), (8, 2))), 40)
    t1 = theta_expansion(ThetaSpec(16, 0, 1, 0, 1, Fraction(1, 2)), 40)
    t2 = theta_expansion(ThetaSpec(16, 16, 5, 8, 5, Fraction(1, 4)), 40)
    assert sturm_compare(2 * t1, f64 + f32, 64, 2)["equal"]
    assert sturm_compare(4 * t2, f64 - f32, 64, 2)["equal"]
    res = sturm_compare(f64, f32, 64, 2)
    assert not res["equal"] and res["first_mismatch"] == 5


def test_sturm_compare_truncation():
    short = eta_quotient_expansion(EtaQuotient(((4, 2), (8, 2))), 10)
    with pytest.raises(TruncationTooShort):
        sturm_compare(short, short, 64, 2)


def test_json_round_trip():
    s = theta_expansion(ThetaSpec(16, 0, 1, 0, 1, Fraction(1, 2)), 30)
    assert PowerSeriesZ.from_json(s.to_json()).coeffs == s.coeffs
