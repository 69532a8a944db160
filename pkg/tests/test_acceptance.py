"""Acceptance criteria AC1-AC10.

Each test records one PASS/FAIL line (shown in the pytest terminal summary,
or printed when this file is run as a script).  Three literal checks are
known to be unattainable and fail by design: AC1's "48 rows" (the table has
47), AC3's printed f2(2i)^24 and AC4's degree bound on the rows where its
hypothesis fails.  Each is paired with a passing check.
"""

import time
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from conftest import ACCEPTANCE
from mahlercm import paperdata
from mahlercm.beilinson import (CASE_IDS, check_isogeny_identities, deninger_path, fundamental_periods,
                                load_case, path_integral_omega, pushforward_multipliers, regulator_case)
from mahlercm.cmsearch import algebraicity, algorithm1, compare_table1, recognize_lambda
from mahlercm.lvalues import F32, F64, coefficients, identity_table, verify_identity
from mahlercm.mahler import mahler_jensen, mahler_lattice
from mahlercm.modular import j_numeric, k_from_tau, lambda2, weber_f1, weber_f2
from mahlercm.qseries import (ThetaSpec, eta_quotient_expansion, sturm_bound, sturm_compare,
                              theta_expansion)
from mahlercm.quadforms import QuadForm, discriminants_with_h_leq_2, tau_of

# tolerances, as stated by the criteria
AC1_SECONDS = 120
AC1_ROWS = 48
AC2_SECONDS = 10
AC3_DIGITS = 60
AC3_WEBER_DIGITS = 40
AC4_SECONDS = 300
AC5_STURM = 16
AC6_TIGHT = 1e-10
AC6_LOOSE = 1e-8
AC6_SECONDS = 30 * 60
AC7_TOL = 1e-3
AC8_RATIO_TOL = 1e-10
AC9_MAP_TOL = 1e-25
AC9_MULT_TOL = 1e-20
AC10_TOL = 1e-8
AC10_DIRECT_TOL = 1e-6

TIGHT_K = ("12+8*sqrt(2)", "12-8*sqrt(2)", "sqrt(2)+sqrt(6)", "sqrt(2)-sqrt(6)",
           "4*sqrt(2)+4*sqrt(6)", "4*sqrt(2)-4*sqrt(6)", "3*sqrt(2)/2+sqrt(14)/2",
           "3*sqrt(2)/2-sqrt(14)/2", "24*sqrt(2)+8*sqrt(14)", "24*sqrt(2)-8*sqrt(14)",
           "4*I", "4*sqrt(2)", "2*sqrt(2)")


def record(key, ok, detail):
    ACCEPTANCE[key] = (bool(ok), detail)
    return bool(ok)


@pytest.fixture(scope="module")
def table1_rows():
    t = time.perf_counter()
    rows = algorithm1(search_prec=128)
    return rows, time.perf_counter() - t


def test_ac1_table1(table1_rows):
    rows, secs = table1_rows
    cmp = compare_table1(rows)
    ok = cmp.ok and len(rows) == len(paperdata.table1()) and secs < AC1_SECONDS
    assert record("AC1", ok, f"{cmp.matched}/{cmp.expected} rows matched, {len(rows)} emitted, {secs:.1f}s")


def test_ac1_literal_row_count(table1_rows):
    rows, _ = table1_rows
    assert record("AC1 literal 48 rows", len(rows) == AC1_ROWS,
                  f"{len(rows)} rows emitted; the embedded table has {len(paperdata.table1())}")


def test_ac2_class_number_lists():
    t = time.perf_counter()
    recs = discriminants_with_h_leq_2()
    secs = time.perf_counter() - t
    h1 = tuple(r.D for r in recs if r.h == 1)
    h2 = tuple(r.D for r in recs if r.h == 2)
    ok = (h1 == paperdata.H1_LIST and h2 == paperdata.H2_LIST and len(h1) == 13 and len(h2) == 29
          and secs < AC2_SECONDS)
    assert record("AC2", ok, f"h=1: {len(h1)}, h=2: {len(h2)}, {secs:.2f}s")


def _spot(printed_f2):
    mp.prec = 256
    tau = mpmath.mpc(0, 1)
    r2 = mpmath.sqrt(2)
    errs = {
        "lambda(2i)": (abs(lambda2(tau) - (17 - 12 * r2)), AC3_DIGITS, 1),
        "j(2i)": (abs(j_numeric(2 * tau) - 287496), AC3_DIGITS, 287496),
        "f1(2i)^24": (abs(weber_f1(2 * tau) ** 24 - 512), AC3_WEBER_DIGITS, 512),
        "f2(2i)^24": (abs(weber_f2(2 * tau) ** 24 - printed_f2), AC3_WEBER_DIGITS, abs(printed_f2)),
    }
    bad = [k for k, (e, d, scale) in errs.items() if not e < mpmath.mpf(10) ** -d * max(1, scale)]
    return bad, errs


def test_ac3_spot_values_literal():
    bad, errs = _spot(-280 + 192 * mpmath.sqrt(2))
    detail = ", ".join(f"{k} err {mpmath.nstr(e, 3)}" for k, (e, _, _) in errs.items())
    assert record("AC3", not bad, detail + (f"; failing: {bad}" if bad else ""))


def test_ac3_spot_values_corrected():
    # -280 + 198 sqrt(2) is the positive root of x^2 + 560 x - 8, forced by j(2i) and f1(2i)^24
    bad, errs = _spot(-280 + 198 * mpmath.sqrt(2))
    assert record("AC3 corrected f2", not bad, f"f2(2i)^24 err {mpmath.nstr(errs['f2(2i)^24'][0], 3)}")


@pytest.fixture(scope="module")
def algebraicity_results(table1_rows):
    rows, _ = table1_rows
    t = time.perf_counter()
    res = algebraicity(rows, prec=512, coeff_bits=80)
    return res, time.perf_counter() - t


def test_ac4_algebraicity_literal(algebraicity_results):
    res, secs = algebraicity_results
    bad = [r.triple for r in res if r.polynomial is None or r.degree > r.product]
    assert record("AC4", not bad and secs < AC4_SECONDS,
                  f"{len(res) - len(bad)}/{len(res)} within degree bound, {secs:.1f}s"
                  + (f"; over the bound: {bad}" if bad else ""))


def test_ac4_algebraicity_with_hypothesis(algebraicity_results):
    res, secs = algebraicity_results
    over = [r for r in res if not r.within_bound]
    # where the theorem's nonvanishing hypothesis fails the bound does not apply;
    # those values are still algebraic, recognized with a wider degree budget
    wider = [recognize_lambda(QuadForm(*r.triple), 4 * r.product, 512, 80) for r in over]
    ok = (all(not r.bound_applies for r in over) and all(p is not None for p in wider)
          and secs < AC4_SECONDS)
    degs = sorted({p.degree for p in wider if p is not None})
    assert record("AC4 hypothesis-aware", ok,
                  f"{len(res) - len(over)}/{len(res)} within the bound; {len(over)} rows with vanishing "
                  f"hypothesis recognized at degree {degs}")


def _terms(series, upto):
    return {int(e): int(c) for e, c in series.nonzero_terms() if e <= upto}


def test_ac5_q_expansions_and_sturm():
    f64 = eta_quotient_expansion(F64.body, 40)
    f32 = eta_quotient_expansion(F32.body, 40)
    printed = {
        "f64": (_terms(f64, 25), {1: 1, 5: 2, 9: -3, 13: -6, 17: 2, 25: -1}),
        "f32": (_terms(f32, 25), {1: 1, 5: -2, 9: -3, 13: 6, 17: 2, 25: -1}),
        "ex4.1": (_terms(theta_expansion(ThetaSpec(16, 0, 1, 0, 1, Fraction(1, 2)), 60), 49),
                  {1: 1, 9: -3, 17: 2, 25: -1, 41: 10, 49: -7}),
        "ex4.2": (_terms(theta_expansion(ThetaSpec(16, 16, 5, 8, 5, Fraction(1, 4)), 90), 85),
                  {5: 1, 13: -3, 29: 5, 37: 1, 45: -3, 53: -7, 61: 5, 85: 2}),
        "g": (_terms(theta_expansion(ThetaSpec(2, 0, 1, 0, 1, Fraction(1, 4), "n",
                                               (("m", 2, 1), ("n", 2, 1))), 50), 43),
              {3: 1, 11: -3, 19: 1, 27: 2, 43: 5}),
    }
    mism = [k for k, (got, want) in printed.items() if got != want]
    th1 = theta_expansion(ThetaSpec(16, 0, 1, 0, 1, Fraction(1, 2)), 40)
    th2 = theta_expansion(ThetaSpec(16, 16, 5, 8, 5, Fraction(1, 4)), 40)
    s1 = sturm_compare(2 * th1, f64 + f32, 64, 2)
    s2 = sturm_compare(4 * th2, f64 - f32, 64, 2)
    ok = (not mism and sturm_bound(64, 2) == AC5_STURM and s1["equal"] and s2["equal"]
          and s1["bound"] == AC5_STURM == s2["bound"])
    assert record("AC5", ok, f"printed expansions {len(printed) - len(mism)}/{len(printed)}, "
                             f"Sturm bound {sturm_bound(64, 2)}: {s1['equal']}, {s2['equal']}")


def test_ac6_mahler_identities():
    mp.prec = 256
    t = time.perf_counter()
    rows = identity_table()
    results = [verify_identity(r, eps=1e-12) for r in rows]
    secs = time.perf_counter() - t
    tight = {r["k"]: r for r in results if r["k"] in TIGHT_K}
    assert len(tight) == len(TIGHT_K)
    bad = [r["k"] for r in results
           if not r["residual"] < (AC6_TIGHT if r["k"] in TIGHT_K else AC6_LOOSE)]
    worst = max(r["residual"] for r in results)
    assert record("AC6", not bad and secs < AC6_SECONDS,
                  f"{len(results) - len(bad)}/{len(results)} identities, worst residual "
                  f"{mpmath.nstr(worst, 3)}, {secs:.1f}s on one worker" + (f"; failing {bad}" if bad else ""))


def test_ac7_cross_method(table1_rows):
    rows, _ = table1_rows
    mp.prec = 128
    diffs = []
    for r in rows:
        tau = tau_of(QuadForm(*r.triple))
        diffs.append(abs(mahler_lattice(tau, AC7_TOL / 10, "direct") - mahler_jensen(k_from_tau(tau), 1e-12)))
    worst = max(diffs)
    assert record("AC7", len(diffs) == len(rows) and worst < AC7_TOL,
                  f"{len(diffs)} CM points, max |direct - Jensen| = {mpmath.nstr(worst, 3)}")


def test_ac8_period_integrals():
    mp.dps = 30
    IE = path_integral_omega(deninger_path("6", "plus"))
    IEs = path_integral_omega(deninger_path("6", "minus"))
    printed = [mpmath.mpf(s) for s in paperdata.PERIOD_INTEGRALS_6]
    # agreement to all printed digits: the value rounds to the printed string
    digits_ok = all(mpmath.nstr(mpmath.im(v), 5) == mpmath.nstr(p, 5) and abs(mpmath.re(v)) < 1e-20
                    for v, p in zip((IE, IEs), printed))
    ratios = []
    for cid in CASE_IDS:
        case = load_case(cid)
        for side, curve in (("plus", case.E), ("minus", case.Es)):
            I = IE if (cid, side) == ("6", "plus") else IEs if (cid, side) == ("6", "minus") \
                else path_integral_omega(deninger_path(cid, side))
            ratio = I / fundamental_periods(curve).imaginary
            ratios.append(min(abs(ratio - 1), abs(ratio + 1)))
    worst = max(ratios)
    assert record("AC8", digits_ok and worst < AC8_RATIO_TOL,
                  f"{mpmath.nstr(mpmath.im(IE), 5)}i, {mpmath.nstr(mpmath.im(IEs), 5)}i; "
                  f"max |ratio -/+ 1| = {mpmath.nstr(worst, 3)} over 10 paths")


EXPECTED_PUSHFORWARD = {"6": {(1, 4)}, "7.1": {(3, -1), (-3, 1)}, "7.2": {(-1, 3), (1, -3)},
                        "7.3": {(7, -1), (-7, 1)}, "7.4": {(1, -7), (-1, 7)}}
EXPECTED_MULTIPLIER = {"6": "6+4*sqrt(2)", "7.1": "sqrt(3)", "7.2": "3+2*sqrt(3)",
                       "7.3": "sqrt(7)", "7.4": "21+8*sqrt(7)"}


def test_ac9_isogeny_suite():
    from mahlercm.expr import eval_k
    lines, ok = [], True
    for cid in CASE_IDS:
        rep = check_isogeny_identities(cid, points=20, dps=40)
        mp.dps = 40
        mult_value = abs(load_case(cid).multiplier.to_mp() - eval_k(EXPECTED_MULTIPLIER[cid]))
        mp.dps = 30
        pf = pushforward_multipliers(cid)
        good = (rep["map_residual"] < AC9_MAP_TOL and rep["composite_residual"] < AC9_MAP_TOL
                and rep["multiplier_residual"] < AC9_MULT_TOL and mult_value < AC9_MULT_TOL
                and rep["kernel_to_O"] and (pf["a"], pf["b"]) in EXPECTED_PUSHFORWARD[cid]
                and abs(pf["a"] * pf["b"]) == rep["degree"])
        ok = ok and good
        lines.append(f"{cid}:({pf['a']},{pf['b']})")
    assert record("AC9", ok, "5 cases, pushforward " + " ".join(lines))


def test_ac10_regulators():
    lines, ok = [], True
    for cid in CASE_IDS:
        rep = regulator_case(cid, dps=40, with_direct=True)
        d = rep.details["direct_difference"]
        good = (rep.residual < AC10_TOL and d < AC10_DIRECT_TOL
                and rep.constant == paperdata.REGULATOR_CONSTANTS[cid] and rep.R > 0)
        ok = ok and good
        lines.append(f"{cid}: {mpmath.nstr(rep.residual, 2)}")
    assert record("AC10", ok, "residuals " + ", ".join(lines))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
