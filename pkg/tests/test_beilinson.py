from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from mahlercm.beilinson import (CASE_IDS, Curve, build_isogeny, chart_inverse, chart_point,
                                check_isogeny_identities, conjugate_pairing, curve_from_k, deninger_path,
                                fundamental_periods, lattice_invariants, load_case, path_integral_omega,
                                printed_isogeny, pushforward_multipliers, random_points,
                                regulator_from_matrix, regulator_pairing, twist, velu_isogeny)
from mahlercm.errors import KernelNotSubgroup
from mahlercm.mahler import mahler_jensen, roots_y
from mahlercm.qfield import Poly, QuadFieldElem as Q


@pytest.fixture(autouse=True)
def _dps40():
    mp.dps = 40


def test_curve_from_k_examples():
    k = Q(12, 8, 2)
    E = curve_from_k(k * k, "plain")
    assert E.a2 == Q(66, 48, 2) and E.a4 == Q(1, 0, 2) and E.a6.is_zero()
    # sqrt2 + sqrt6 squared is 8 + 4 sqrt3
    E = curve_from_k(Q(8, 4, 3), "rotated")
    assert E.a2 == Q(0, 2, 3) and E.a4 == Q(4, 0, 3)
    # (24 sqrt2 + 8 sqrt14)^2 = 2048 + 768 sqrt7
    E = curve_from_k(Q(2048, 768, 7), "rotated")
    assert E.a2 == Q(1020, 384, 7)


def test_singular_curve_rejected():
    with pytest.raises(ValueError):
        Curve(Q(2, 0, 2), Q(1, 0, 2), Q(0, 0, 2))


def test_chart_round_trip():
    for chart in ("plain", "rotated"):
        k = mpmath.mpf(5)
        x = mpmath.expj(mpmath.mpf("0.7"))
        y, _ = roots_y(x, k)
        X, Y = chart_point(x, y, k, chart)
        c = 1 if chart == "plain" else 2
        a2 = k * k / (4 if c == 1 else 2) - 2 * c
        assert abs(Y * Y - (X ** 3 + a2 * X * X + c * c * X)) < 1e-30
        xs, ys = chart_inverse(X, Y, k, chart)
        assert abs(xs - x) < 1e-30 and abs(ys - y) < 1e-30


def test_velu_degree4_intermediate_curve():
    case = load_case("6")
    psi = velu_isogeny(case.E, Poly([Q(0, 0, 2), Q(1, 0, 2), Q(1, 0, 2)], 2))
    assert psi.degree == 4
    assert psi.codomain.a4 == Q(1276, 960, 2) and psi.codomain.a6 == Q(137464, 96960, 2)


def test_velu_rejects_non_subgroup():
    case = load_case("6")
    with pytest.raises(KernelNotSubgroup):
        velu_isogeny(case.E, Poly([Q(-5, 0, 2), Q(1, 0, 2)], 2))


def test_twist_to_conjugate_curve():
    case = load_case("6")
    psi, image, iso, phi = build_isogeny(case)
    img, _ = twist(psi.codomain, Q(Fraction(3, 2), -1, 2), Q(Fraction(-49, 2), 18, 2))
    assert img.same_as(case.Es)


def test_twist_identity_and_inverse():
    E = load_case("7.1").E
    img, iso = twist(E, Q(1, 0, 3), Q(0, 0, 3))
    assert img.same_as(E)
    img, iso = twist(E, Q(2, 1, 3), Q(-1, 3, 3))
    back = iso.inverse()
    for P in random_points(E, 20, seed=3):
        Q2 = back(iso(P))
        assert abs(Q2[0] - P[0]) < 1e-30 and abs(Q2[1] - P[1]) < 1e-30
        assert img.residual(iso(P)) < 1e-25 * (1 + abs(iso(P)[1]) ** 2)


def test_kernel_point_maps_to_origin():
    case = load_case("6")
    y = 4 * mpmath.sqrt(4 + 3 * mpmath.sqrt(2))
    assert printed_isogeny(case)((mpmath.mpf(-1), y)) is None


@pytest.mark.parametrize("cid", CASE_IDS)
def test_isogeny_identities(cid):
    rep = check_isogeny_identities(cid, points=20, dps=40)
    assert rep["ok"], rep
    assert rep["map_residual"] < 1e-25 and rep["composite_residual"] < 1e-25
    assert rep["multiplier_residual"] < 1e-20


def test_multiplier_72():
    assert load_case("7.2").multiplier == Q(3, 2, 3)


def test_paths():
    p, m = deninger_path("6", "plus"), deninger_path("6", "minus")
    assert p.kind == "loop" and m.kind == "arcs"
    theta0 = mpmath.atan(2 * mpmath.sqrt(2 + 10 * mpmath.sqrt(2)) / 7)
    assert abs(m.segments[0][0] + theta0) < 1e-30 and abs(m.segments[0][1] - theta0) < 1e-30
    assert deninger_path("7.4", "plus").kind == "loop" == deninger_path("7.4", "minus").kind
    for cid in CASE_IDS:
        assert deninger_path(cid, "plus").in_minus_part() and deninger_path(cid, "minus").in_minus_part()


def test_period_integrals_case6():
    mp.dps = 30
    IE = path_integral_omega(deninger_path("6", "plus"))
    IEs = path_integral_omega(deninger_path("6", "minus"))
    assert mpmath.nstr(mpmath.im(IE), 5) == "0.27152" and abs(mpmath.re(IE)) < 1e-25
    assert mpmath.nstr(mpmath.im(IEs), 5) == "3.1651" and abs(mpmath.re(IEs)) < 1e-25


def test_fundamental_periods_certified():
    E = load_case("6").E
    per = fundamental_periods(E)
    c4, c6 = (c.to_mp() for c in E.c4_c6())
    g2, g3 = lattice_invariants(per.w1, per.w2)
    assert abs(g2 - c4 / 12) < 1e-25 * abs(c4) and abs(g3 - c6 / 216) < 1e-25 * abs(c6)
    assert abs(mpmath.re(per.imaginary)) < 1e-25


def test_periods_scale_under_twist():
    E = load_case("7.1").E
    u = Q(2, 1, 3)
    img, _ = twist(E, u, Q(1, 0, 3))
    # omega = dX/2Y pulls back with factor 1/u, so periods scale by 1/u
    r = fundamental_periods(img).imaginary / fundamental_periods(E).imaginary
    assert min(abs(r - s / u.to_mp()) for s in (1, -1)) < 1e-25


def test_pushforward_multipliers():
    mp.dps = 30
    assert (lambda d: (d["a"], d["b"]))(pushforward_multipliers("6")) == (1, 4)
    for cid, expected in (("7.2", {(-1, 3), (1, -3)}), ("7.3", {(7, -1), (-7, 1)})):
        d = pushforward_multipliers(cid)
        assert (d["a"], d["b"]) in expected and d["ab"] == d["a"] * d["b"]


def test_m1_pairings_closed_forms():
    mp.dps = 30
    r2 = mpmath.sqrt(2)
    m_plus, m_minus = mahler_jensen(12 + 8 * r2), mahler_jensen(12 - 8 * r2)
    p = regulator_pairing(deninger_path("6", "plus"), "M1", m_value=m_plus, eps=1e-15)
    assert p["multiple_of_m"] == -1 and p["difference"] < 1e-6
    assert abs(p["direct"] + m_plus) < 1e-6
    q = regulator_pairing(deninger_path("6", "minus"), "M1", m_value=m_minus, eps=1e-15)
    assert q["multiple_of_m"] == -2 and abs(q["direct"] + 2 * m_minus) < 1e-6
    m71 = mahler_jensen(mpmath.sqrt(2) + mpmath.sqrt(6))
    s = regulator_pairing(deninger_path("7.1", "plus"), "M1", m_value=m71, eps=1e-15)
    assert abs(s["multiple_of_m"]) == 4 and abs(abs(s["direct"]) - 4 * m71) < 1e-6


def test_m2_direct_pairing_case6():
    mp.dps = 30
    r2 = mpmath.sqrt(2)
    m_minus = mahler_jensen(12 - 8 * r2)
    p = regulator_pairing(deninger_path("6", "plus"), "M2", "6", m_value=m_minus, eps=1e-12,
                          multipliers=(1, 4))
    assert p["difference"] < 1e-6


@pytest.fixture(scope="module")
def report6():
    from mahlercm.beilinson import regulator_case
    return regulator_case("6", dps=40)


def test_regulator_case6(report6):
    assert report6.residual < 1e-8 and report6.R > 0 and report6.constant == 4096
    assert report6.details["direct_difference"] < 1e-6


def test_conjugate_case_same_regulator(report6):
    conj = conjugate_pairing(report6)
    assert abs(regulator_from_matrix(conj) - report6.R) < 1e-25
    # swapping the curves transposes the roles of the two rows and columns
    (p11, p12), _ = report6.pairing
    assert conj[0] == [p12, p11]


def test_report_serializes(report6):
    d = report6.to_dict(full=True)
    assert d["case"] == "6" and d["multipliers"] == [1, 4] and "details" in d
