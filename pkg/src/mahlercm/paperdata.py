"""Embedded reference data: the CM-point table, the Mahler measure / L-value
table, and the class-number lists.  Loaded read-only and checksummed."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Tuple

from .errors import ChecksumMismatch

H1_LIST: Tuple[int, ...] = (-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163)
H2_LIST: Tuple[int, ...] = (
    -15, -20, -24, -32, -35, -36, -40, -48, -51, -52, -60, -64, -72, -75, -88, -91,
    -99, -100, -112, -115, -123, -147, -148, -187, -232, -235, -267, -403, -427)


@dataclass(frozen=True)
class Table1Entry:
    triple: Tuple[int, int, int]
    h2: int          # h(D_{2 tau})
    product: int     # h(D_tau) h(D_{4 tau})
    lam: str         # printed lambda(2 tau), leading significant digits


# (a, b, c), h(D_2tau), h(D_tau)h(D_4tau), lambda(2 tau)
_TABLE1 = [
    ((2, -2, 1), 1, 1, "-1.0000"),
    ((4, 0, 1), 1, 1, "0.50000"),
    ((8, -4, 1), 1, 1, "2.0000"),
    ((16, 16, 5), 1, 2, "-32.970"),
    ((16, 0, 1), 1, 2, "0.97056"),
    ((1, 0, 1), 1, 2, "0.029437"),
    ((5, -4, 1), 1, 2, "33.970"),
    ((4, -4, 5), 1, 4, "-0.030330"),
    ((20, -4, 1), 1, 4, "1.03033"),
    ((8, 8, 3), 1, 2, "-4.8284"),
    ((8, 0, 1), 1, 2, "0.82842"),
    ((2, 0, 1), 1, 2, "0.17157"),
    ((6, 4, 1), 1, 2, "5.8284"),
    ((4, 4, 3), 1, 4, "-0.20710"),
    ((12, 4, 1), 1, 4, "1.20710"),
    ((3, 3, 1), 1, 2, "-13.928"),
    ((1, 1, 1), 1, 2, "-0.071796"),
    ((16, 4, 1), 1, 2, "1.07179"),
    ((16, 12, 3), 1, 2, "14.928"),
    ((4, 0, 3), 1, 4, "0.066987"),
    ((12, 0, 1), 1, 4, "0.93301"),
    ((4, 2, 1), 1, 1, "0.50000-0.86602i"),
    ((4, -2, 1), 1, 1, "0.50000+0.86602i"),
    ((7, 7, 2), 1, 2, "-253.99"),
    ((1, 1, 2), 1, 2, "-0.0039370"),
    ((32, 4, 1), 1, 2, "1.0039"),
    ((32, 28, 7), 1, 2, "254.99"),
    ((4, 0, 7), 1, 4, "0.0039216"),
    ((28, 0, 1), 1, 4, "0.99607"),
    ((2, 1, 1), 1, 1, "0.031250-0.24803i"),
    ((2, -1, 1), 1, 1, "0.031250+0.24803i"),
    ((4, 3, 1), 1, 1, "0.50000-3.9686i"),
    ((4, -3, 1), 1, 1, "0.50000+3.9686i"),
    ((8, 2, 1), 1, 1, "0.96875-0.24803i"),
    ((8, -2, 1), 1, 1, "0.96875+0.24803i"),
    ((4, -1, 1), 2, 4, "0.50000+0.30096i"),
    ((4, 1, 1), 2, 4, "0.50000-0.30096i"),
    ((8, 7, 2), 2, 4, "0.50000-27.411i"),
    ((8, -7, 2), 2, 4, "0.50000+27.411i"),
    ((2, 1, 2), 2, 4, "0.00066519-0.036468i"),
    ((2, -1, 2), 2, 4, "0.00066519+0.036468i"),
    ((6, 3, 1), 2, 4, "1.4680-0.88368i"),
    ((6, -3, 1), 2, 4, "1.4680+0.88368i"),
    ((8, 6, 3), 2, 4, "-0.46808-0.88368i"),
    ((8, -6, 3), 2, 4, "-0.46808+0.88368i"),
    ((16, 2, 1), 2, 4, "0.99933-0.036468i"),
    ((16, -2, 1), 2, 4, "0.99933+0.036468i"),
]


@dataclass(frozen=True)
class Table2Entry:
    k_expr: str                  # expression for k, see lvalues.parse_k
    c_rational: Fraction         # c_k = c_rational * sqrt(c_sqrt) / pi^2
    c_sqrt: int
    level: int
    scale: Fraction              # f_k = scale * sum chi(n) (alpha m + beta n) q^(A m^2 + B m n + C n^2)
    linear: Tuple[int, int]
    form: Tuple[int, int, int]


# k, c numerator, c sqrt, level, scale, (alpha, beta), (A, B, C)
_TABLE2 = [
    ("4*I", 16, 1, 32, "1/2", (2, 1), (8, 4, 1)),
    ("4*sqrt(2)", 16, 1, 64, "1/2", (0, 1), (4, 0, 1)),
    ("2*sqrt(2)", 8, 1, 32, "1/2", (1, 1), (2, 2, 1)),
    ("root(8,4)*(sqrt(2)-1)*I", 8, 1, 64, "1/2", (-2, 1), (5, -4, 1)),
    ("root(8,4)*(sqrt(2)+1)", 8, 1, 64, "1/2", (0, 1), (1, 0, 1)),
    ("12+8*sqrt(2)", 32, 1, 64, "1/2", (0, 1), (16, 0, 1)),
    ("12-8*sqrt(2)", 64, 1, 64, "1/4", (8, 5), (16, 16, 5)),
    ("8*I*sqrt(4+3*sqrt(2))", 32, 1, 256, "1/2", (2, 1), (20, 4, 1)),
    ("8*sqrt(3*sqrt(2)-4)", 256, 1, 256, "1/16", (2, 5), (4, 4, 5)),
    ("4*I/sqrt(2*sqrt(2)+2)", 8, 2, 64, "1/2", (-2, 1), (6, -4, 1)),
    ("4/sqrt(2*sqrt(2)-2)", 8, 2, 64, "1/2", (0, 1), (2, 0, 1)),
    ("4+4*sqrt(2)", 16, 2, 64, "1/2", (0, 1), (8, 0, 1)),
    ("4-4*sqrt(2)", 32, 2, 64, "-1/4", (4, -3), (8, -8, 3)),
    ("4*I*sqrt(2+2*sqrt(2))", 16, 2, 128, "1/2", (-2, 1), (12, -4, 1)),
    ("4*sqrt(2*sqrt(2)-2)", 64, 2, 128, "-1/8", (2, -3), (4, -4, 3)),
    ("(8-4*sqrt(3))*I", 48, 3, 48, "-1/2", (2, -1), (16, -12, 3)),
    ("(8+4*sqrt(3))*I", 16, 3, 48, "-1/2", (2, -1), (16, -4, 1)),
    ("sqrt(2)+sqrt(6)", 6, 3, 48, "-1/6", (1, -2), (1, -1, 1)),
    ("sqrt(2)-sqrt(6)", 2, 3, 48, "-1/2", (3, -2), (3, -3, 1)),
    ("4*sqrt(2)+4*sqrt(6)", 16, 3, 192, "1/2", (0, 1), (12, 0, 1)),
    ("4*sqrt(2)-4*sqrt(6)", 48, 3, 192, "1/2", (0, 1), (4, 0, 3)),
    ("2*sqrt(3)+2*I", 8, 3, 48, "-1/2", (1, -1), (4, -2, 1)),
    ("2*sqrt(3)-2*I", 8, 3, 48, "1/2", (1, 1), (4, 2, 1)),
    ("(32-12*sqrt(7))*I", 112, 7, 112, "-1/2", (2, -1), (32, -28, 7)),
    ("(32+12*sqrt(7))*I", 16, 7, 112, "-1/2", (2, -1), (32, -4, 1)),
    ("3*sqrt(2)/2+sqrt(14)/2", 14, 7, 112, "-1/14", (1, -4), (1, -1, 2)),
    ("3*sqrt(2)/2-sqrt(14)/2", 2, 7, 112, "-1/2", (7, -4), (7, -7, 2)),
    ("24*sqrt(2)+8*sqrt(14)", 16, 7, 448, "1/2", (0, 1), (28, 0, 1)),
    ("24*sqrt(2)-8*sqrt(14)", 112, 7, 448, "1/2", (0, 1), (4, 0, 7)),
    ("6+2*I*sqrt(7)", 8, 7, 56, "-1/2", (1, -1), (8, -2, 1)),
    ("6-2*I*sqrt(7)", 8, 7, 56, "1/2", (1, 1), (8, 2, 1)),
    ("3/2+I*sqrt(7)/2", 4, 7, 28, "-1/4", (3, -2), (4, -3, 1)),
    ("3/2-I*sqrt(7)/2", 4, 7, 28, "1/4", (3, 2), (4, 3, 1)),
    ("3*sqrt(7)/2+I/2", 4, 7, 56, "-1/4", (1, -2), (2, -1, 1)),
    ("3*sqrt(7)/2-I/2", 4, 7, 56, "1/4", (1, 2), (2, 1, 1)),
]

# Rows whose identity is checked at 1e-10 rather than 1e-8.
TIGHT_ROWS = (
    "12+8*sqrt(2)", "12-8*sqrt(2)", "sqrt(2)+sqrt(6)", "sqrt(2)-sqrt(6)",
    "4*sqrt(2)+4*sqrt(6)", "4*sqrt(2)-4*sqrt(6)", "3*sqrt(2)/2+sqrt(14)/2",
    "3*sqrt(2)/2-sqrt(14)/2", "24*sqrt(2)+8*sqrt(14)", "24*sqrt(2)-8*sqrt(14)",
    "4*I", "4*sqrt(2)", "2*sqrt(2)",
)

# Regulator constants per case and the printed period integrals.
REGULATOR_CONSTANTS = MappingProxyType({"6": 4096, "7.1": 2304, "7.2": 9216, "7.3": 3136, "7.4": 50176})
PERIOD_INTEGRALS_6 = ("0.27152", "3.1651")

# Newform labels quoted for the first case (opaque strings).
LMFDB_LABELS = MappingProxyType({
    "f64": "64.2.a.a",
    "f32": "32.2.a.a",
    "E_12+8sqrt2": "2.2.8.1-32.1-a8",
})


# ---------------------------------------------------------------------------
# regulator case dossiers
#
# Coefficients over Q(sqrt d) are written (m, u, v) for m * (u + v sqrt d);
# polynomials list coefficients from the constant term up.  A printed map is
# (scalar, numerator factors, denominator factors) with scalar (m, u, v, e)
# meaning m * (u + v sqrt d)^e.

def _P(*cs):
    return tuple(c if len(c) == 3 else (1,) + tuple(c) for c in cs)


_X = _P((0, 0), (1, 0))
_X1 = _P((1, 0), (1, 0))            # X + 1
_Xm1 = _P((-1, 0), (1, 0))          # X - 1
_QUARTIC_6 = _P((1, 0), (4, 0), (2, 131, 96), (4, 0), (1, 0))
_PHI1_73 = _P((0, 8), (56, 0), (0, 14), (7, 0))
_PHI1_74 = _P((8, 21, -8), (308, 0), (-14, 15, 8), (7, 0))

CASES = MappingProxyType({
    "6": MappingProxyType({
        "d": 2, "chart": "plain", "k": "12+8*sqrt(2)", "k_conj": "12-8*sqrt(2)",
        "k2": (1, 272, 192),
        "kernel": _P((0, 0), (1, 0), (1, 0)),
        "intermediate": ((1, 66, 48), (1, 1276, 960), (1, 137464, 96960)),
        "psi_x": ((1, 1, 0, 1), (_P((1, 0), (2, 0), (-2, 127, 96), (2, 0), (1, 0)),), (_X, _X1, _X1)),
        "psi_y": ((1, 1, 0, 1), (_Xm1, _QUARTIC_6), (_X, _X, _X1, _X1, _X1)),
        "u": ("3/2", -1), "r": ("-49/2", 18),
        "phi_x": (("1/4", 1, 0, 1), (_Xm1, _Xm1, _P((17, -12), (-6, 5, -4), (17, -12))), (_X, _X1, _X1)),
        "phi_y": (("1/8", 99, -70, 1), (_Xm1, _QUARTIC_6), (_X, _X, _X1, _X1, _X1)),
        "degree": 4, "composite_sign": 1, "multiplier": (6, 4),
        "pushforward": (1, 4), "pairing_scale": (1, 2),
        "theta_exprs": {"theta0": "atan(2*sqrt(2+10*sqrt(2))/7)"},
        "period_integrals": ("0.27152", "3.1651"),
        "constant": 4096,
    }),
    "7.1": MappingProxyType({
        "d": 3, "chart": "rotated", "k": "sqrt(2)+sqrt(6)", "k_conj": "sqrt(2)-sqrt(6)",
        "k2": (1, 8, 4),
        "kernel": _P((0, "2/3"), (1, 0)),
        "phi_x": ((3, 1, 0, 1), (_X, _P((12, 0), (0, 4), (1, 0))), (_P((0, 2), (3, 0)),) * 2),
        "phi_y": ((3, 0, 1, 1), (_P((0, 2), (1, 0)), _P((4, 0), (0, 0), (1, 0))), (_P((0, 2), (3, 0)),) * 3),
        "u": (0, "1/3"),
        "degree": 3, "composite_sign": -1, "multiplier": (0, 1),
        "pushforward": (3, -1), "pairing_scale": (4, 4),
        "theta_exprs": {"theta1": "pi-atan(sqrt((sqrt(2)-1)*(sqrt(3)-1)/2))",
                        "theta2": "pi-atan(sqrt((sqrt(2)+1)*(sqrt(3)+1)/2))"},
        "constant": 2304,
    }),
    "7.2": MappingProxyType({
        "d": 3, "chart": "rotated", "k": "4*sqrt(2)+4*sqrt(6)", "k_conj": "4*sqrt(2)-4*sqrt(6)",
        "k2": (1, 128, 64),
        "kernel": _P((1, 2, "-4/3"), (1, 0)),
        "phi_x": ((3, 1, 0, 1), (_X, _P((12, 0), (12, -8), (7, -4))), (_P((6, -4), (3, 0)),) * 2),
        "phi_y": ((1, -3, 2, 3), (_P((-6, -4), (1, 0)), _P((4, 0), (12, 0), (1, 0))), (_P((6, -4), (3, 0)),) * 3),
        "u": (-1, "2/3"),
        "degree": 3, "composite_sign": -1, "multiplier": (3, 2),
        "pushforward": (-1, 3), "pairing_scale": (2, 2),
        "theta_exprs": {},
        "constant": 9216,
    }),
    "7.3": MappingProxyType({
        "d": 7, "chart": "rotated", "k": "3*sqrt(2)/2+sqrt(14)/2", "k_conj": "3*sqrt(2)/2-sqrt(14)/2",
        "k2": (1, 8, 3),
        "kernel": _P((0, "8/7"), (8, 0), (0, 2), (1, 0)),
        "phi_x": ((7, 1, 0, 1),
                  (_X, _P((448, 0), (0, 448), (1232, 0), (0, 240), (168, 0), (0, 8), (1, 0))),
                  (_PHI1_73,) * 2),
        "phi_y": ((7, 0, 1, 1),
                  (_P((0, 512), (3584, 0), (0, 1536), (2752, 0), (0, 544), (720, 0), (0, 120), (96, 0),
                      (0, 6), (1, 0)),),
                  (_PHI1_73,) * 3),
        "u": (0, "1/7"),
        "degree": 7, "composite_sign": -1, "multiplier": (0, 1),
        "pushforward": (7, -1), "pairing_scale": (4, 4),
        "theta_exprs": {"theta1": "pi-atan(sqrt(552*sqrt(2)-433-4*sqrt(7*(2993-1428*sqrt(2))))/47)",
                        "theta2": "atan(sqrt(552*sqrt(2)-433+4*sqrt(7*(2993-1428*sqrt(2))))/47)"},
        "constant": 3136,
    }),
    "7.4": MappingProxyType({
        "d": 7, "chart": "rotated", "k": "24*sqrt(2)+8*sqrt(14)", "k_conj": "24*sqrt(2)-8*sqrt(14)",
        "k2": (1, 2048, 768),
        "kernel": _P(("8/7", 21, -8), (44, 0), (-2, 15, 8), (1, 0)),
        "phi_x": ((7, 1, 0, 1),
                  (_X, _P((448, 0), (-448, 15, 8), (560, 139, 48), (-96, 189, 104), (12, 371, -32),
                          (44, 21, -8), (127, -48))),
                  (_PHI1_74,) * 2),
        "phi_y": ((-1, 21, -8, 3),
                  (_P((-512, 21, 8), (-256, 6727, 2544), (1536, 1029, 388), (256, 2104321, 795348),
                      (64, 13721325, 5186128), (288, 2959, 1112), (-96, 212583, 80356),
                      (-48, 6289, 2380), (-6, 15, 8), (1, 0)),),
                  (_PHI1_74,) * 3),
        "u": ("-3", "8/7"),
        "degree": 7, "composite_sign": -1, "multiplier": (21, 8),
        "pushforward": (1, -7), "pairing_scale": (2, 2),
        "theta_exprs": {},
        "constant": 50176,
    }),
})


def _canonical():
    return json.dumps({
        "h1": H1_LIST, "h2": H2_LIST, "table1": _TABLE1,
        "table2": [(k, c, s, lv, sc, list(lin), list(f)) for k, c, s, lv, sc, lin, f in _TABLE2],
        "tight": TIGHT_ROWS, "regulator": dict(REGULATOR_CONSTANTS),
        "periods": PERIOD_INTEGRALS_6, "labels": dict(LMFDB_LABELS),
        "cases": {k: dict(v) for k, v in CASES.items()},
    }, sort_keys=True, separators=(",", ":"), default=str)


def checksum() -> str:
    return hashlib.sha256(_canonical().encode()).hexdigest()


def verify():
    if checksum() != _EXPECTED:
        raise ChecksumMismatch("embedded reference data was modified")


def table1() -> Tuple[Table1Entry, ...]:
    verify()
    return tuple(Table1Entry(t, h2, p, lam) for t, h2, p, lam in _TABLE1)


def table2() -> Tuple[Table2Entry, ...]:
    verify()
    return tuple(Table2Entry(k, Fraction(c), s, lv, Fraction(sc), lin, f)
                 for k, c, s, lv, sc, lin, f in _TABLE2)


_EXPECTED = "6b4397800222e9691f9894758e49a377470b7b53df9b4808d455525d6ce832ae"
