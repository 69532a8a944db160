import math

import mpmath
import pytest

from mahlercm import paperdata
from mahlercm.errors import BadDiscriminant
from mahlercm.quadforms import (QuadForm, class_number, class_number_by_order_formula, cm_scale,
                                discriminant_lists, discriminants_csv, discriminants_with_h_leq_2,
                                form_in_Fprime, in_F, in_Fprime, reduce, reduced_forms, tau_of)


def brute_reduced(D):
    """Reduced primitive forms of discriminant D by exhaustive search."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(a, b, c) == 1:
                out.append((a, b, c))
        a += 1
    return sorted(out)


def test_reduce_examples():
    assert reduce(QuadForm(1, 0, 1)).as_tuple() == (1, 0, 1)
    assert reduce(QuadForm(3, 4, 2)).as_tuple() == (1, 0, 2)
    assert reduce(QuadForm(2, 2, 3)).as_tuple() == (2, 2, 3)


def test_class_numbers():
    assert class_number(-4) == 1
    assert class_number(-15) == 2
    assert class_number(-163) == 1
    for D in (-3, -20, -23, -56, -100, -163, -420):
        assert len(reduced_forms(D)) == len(brute_reduced(D))


def test_order_formula():
    assert class_number_by_order_formula(-4, 2) == 1 == class_number(-16)
    assert class_number_by_order_formula(-3, 2) == 1 == class_number(-12)
    assert class_number_by_order_formula(-4, 4) == 2 == class_number(-64)
    for D in (-3, -4, -7, -8, -11, -15, -20, -24):
        for m in range(1, 8):
            assert class_number_by_order_formula(D, m) == class_number(m * m * D)


def test_lists_match_embedded():
    h1, h2 = discriminant_lists()
    assert tuple(h1) == paperdata.H1_LIST and tuple(h2) == paperdata.H2_LIST
    for D in h1 + h2:
        assert len(reduced_forms(D)) == (1 if D in h1 else 2)
    csv = discriminants_csv(discriminants_with_h_leq_2())
    assert csv.splitlines()[0] == "D,h" and len(csv.splitlines()) == 43


def test_bad_discriminant():
    with pytest.raises(BadDiscriminant):
        class_number(-5)


def test_cm_scale():
    assert cm_scale(QuadForm(1, 0, 1), 2).as_tuple() == (1, 0, 4)
    assert cm_scale(QuadForm(1, 0, 1), 4).as_tuple() == (1, 0, 16)
    assert cm_scale(QuadForm(2, -2, 1), 1).as_tuple() == (2, -2, 1)


def test_domains():
    assert in_F(tau_of(QuadForm(1, 0, 1))) and in_Fprime(tau_of(QuadForm(1, 0, 1)))
    tau = tau_of(QuadForm(5, -4, 1))
    assert abs(tau - mpmath.mpc(2, 1) / 5) < 1e-60
    assert in_Fprime(tau) and not in_F(tau)
    assert form_in_Fprime(QuadForm(5, -4, 1))
    # boundary point: |tau| = 1, Re tau = -1/2; the Re >= 0 half of the boundary is kept
    tau = tau_of(QuadForm(1, 1, 1))
    assert abs(abs(tau) - 1) < 1e-60 and abs(tau.real + 0.5) < 1e-60
    assert not in_F(tau) and in_F(tau + 1)
