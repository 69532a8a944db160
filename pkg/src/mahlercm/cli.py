"""Command-line interface.

Every command prints one JSON document ({"schema": 1, ...}) or CSV with
``--format csv``.  Exit code 0 means every requested check passed, 1 means a
check missed its tolerance, 2 means an error (reported as structured JSON).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
import urllib.error
import urllib.request
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import mpmath
from mpmath import mp

from . import paperdata
from .errors import DomainError, MahlerCMError, NetworkError, NotFound

SCHEMA = 1
ENV_PREFIX = "MAHLERCM_"
DEFAULT_EPS = {"mahler": "1e-30", "lvalue": "1e-12", "identity": "1e-12", "regulator": "1e-8"}


# ---------------------------------------------------------------------------
# configuration


@dataclass
class Config:
    precision: int = 256
    eps: Dict[str, str] = field(default_factory=lambda: dict(DEFAULT_EPS))
    cache_dir: str = str(Path.home() / ".cache" / "mahlercm")
    online: bool = False

    def __post_init__(self):
        if self.precision < 64:
            raise DomainError(f"precision must be at least 64 bits, got {self.precision}")


def _parse_bool(v: str) -> bool:
    return v.strip().lower() in ("1", "true", "yes", "on")


def read_config_file(path: Path) -> Dict[str, str]:
    """key = value lines; '#' starts a comment."""
    out = {}
    for n, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{n}: expected key = value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def resolve_config(config_path: Optional[str] = None, env: Optional[Dict[str, str]] = None,
                   flags: Optional[Dict[str, Any]] = None) -> Config:
    """File, then environment, then flags; later sources win."""
    env = os.environ if env is None else env
    raw: Dict[str, str] = {}
    path = config_path or env.get(ENV_PREFIX + "CONFIG")
    if path:
        raw.update(read_config_file(Path(path)))
    for key in ("precision", "cache_dir", "online"):
        if ENV_PREFIX + key.upper() in env:
            raw[key] = env[ENV_PREFIX + key.upper()]
    for key, v in (flags or {}).items():
        if v is not None:
            raw[key] = v
    cfg = Config()
    eps = dict(DEFAULT_EPS)
    for key, v in raw.items():
        if key == "precision":
            cfg.precision = int(v)
        elif key == "cache_dir":
            cfg.cache_dir = str(v)
        elif key == "online":
            cfg.online = v if isinstance(v, bool) else _parse_bool(str(v))
        elif key.startswith("eps."):
            eps[key[4:]] = str(v)
        else:
            raise DomainError(f"unknown configuration key {key!r}")
    cfg.eps = eps
    cfg.__post_init__()
    return cfg


# ---------------------------------------------------------------------------
# output


def _jsonable(x):
    if isinstance(x, (mpmath.mpf,)):
        return mpmath.nstr(x, 30)
    if isinstance(x, mpmath.mpc):
        return {"re": mpmath.nstr(x.real, 30), "im": mpmath.nstr(x.imag, 30)}
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_dict"):
        return _jsonable(x.to_dict())
    return x


def _csv_rows(result) -> List[Dict[str, Any]]:
    if isinstance(result, dict):
        for key in ("rows", "results", "cases"):
            if isinstance(result.get(key), list):
                return result[key]
        return [{"key": k, "value": v} for k, v in result.items()]
    if isinstance(result, list):
        return result
    return [{"value": result}]


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    rows = _csv_rows(doc["result"])
    keys: List[str] = []
    for r in rows:
        for k in (r if isinstance(r, dict) else {"value": r}):
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        r = r if isinstance(r, dict) else {"value": r}
        w.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()})
    return buf.getvalue()


def error_doc(command: str, exc: BaseException) -> dict:
    if isinstance(exc, MahlerCMError):
        err = exc.to_dict()
    else:
        err = {"error": type(exc).__name__, "message": str(exc)}
    return {"schema": SCHEMA, "command": command, "ok": False, **err}


# ---------------------------------------------------------------------------
# LMFDB client (best effort, never gates acceptance)


LMFDB_API = "https://www.lmfdb.org/api/mf_newforms/?label={label}&_format=json&_fields=traces"


def lmfdb_fetch(label: str, cache_dir: str, online: bool, nmax: int = 25,
                opener=urllib.request.urlopen) -> Optional[List[int]]:
    """q-expansion coefficients a_1..a_nmax of a classical newform label.

    Response bodies are cached on disk keyed by label.  Offline runs use the
    cache or return None (the caller reports the cross-check as skipped).
    """
    if label not in paperdata.LMFDB_LABELS.values():
        raise NotFound(f"label {label!r} is not in the embedded data")
    if label.count(".") != 3 or "-" in label:
        raise NotFound(f"label {label!r} is not a classical newform label")
    cache = Path(cache_dir) / "lmfdb" / f"{label}.json"
    if cache.exists():
        body = cache.read_text()
    elif not online:
        return None
    else:
        try:
            with opener(LMFDB_API.format(label=label), timeout=20) as resp:
                body = resp.read().decode()
        except (urllib.error.URLError, OSError) as e:
            raise NetworkError(f"fetching {label}: {e}") from e
        cache.parent.mkdir(parents=True, exist_ok=True)
        cache.write_text(body)
    data = json.loads(body).get("data") or []
    if not data:
        raise NotFound(f"LMFDB has no record for {label!r}")
    traces = [int(t) for t in data[0]["traces"]]
    # a_1 = 1 for a newform; a leading a_0 = 0 slot is dropped if present
    if traces and traces[0] == 0:
        traces = traces[1:]
    return traces[:nmax]


def lmfdb_crosscheck(cfg: Config, nmax: int = 25) -> dict:
    from .lvalues import F32, F64, coefficients
    out = {}
    for name, spec in (("f64", F64), ("f32", F32)):
        label = paperdata.LMFDB_LABELS[name]
        try:
            got = lmfdb_fetch(label, cfg.cache_dir, cfg.online, nmax)
        except NetworkError as e:
            out[name] = {"label": label, "status": "skipped", "reason": str(e)}
            continue
        if got is None:
            out[name] = {"label": label, "status": "skipped", "reason": "offline and not cached"}
            continue
        ours = [int(c) for c in coefficients(spec, nmax)]
        out[name] = {"label": label, "status": "match" if ours == got else "mismatch"}
    return out


# ---------------------------------------------------------------------------
# command implementations; each returns (result, ok)


def _parse_triple(s: str):
    parts = [int(p) for p in s.replace("(", "").replace(")", "").split(",")]
    if len(parts) != 3:
        raise DomainError(f"expected a,b,c, got {s!r}")
    return tuple(parts)


def _tau_from_args(args):
    from .quadforms import QuadForm, tau_of
    from .expr import eval_k
    if args.triple:
        return tau_of(QuadForm(*_parse_triple(args.triple)))
    if args.tau:
        return mpmath.mpc(eval_k(args.tau))
    raise DomainError("give --triple a,b,c or --tau <expression>")


def cmd_cm_search(args, cfg):
    from .cmsearch import algorithm1, compare_table1
    rows = algorithm1(search_prec=args.search_prec, emit_prec=cfg.precision,
                      require_h4_leq_2=not args.no_h4_filter)
    result = {"count": len(rows), "rows": [r.to_dict() for r in rows]}
    ok = True
    if args.check_table1:
        cmp = compare_table1(rows)
        result["table1"] = cmp.to_dict()
        ok = cmp.ok
    return result, ok


def cmd_class_numbers(args, cfg):
    from .quadforms import discriminants_with_h_leq_2
    if args.max_h not in (1, 2):
        raise DomainError("--max-h must be 1 or 2")
    recs = [r for r in discriminants_with_h_leq_2(args.fundamental_bound) if r.h <= args.max_h]
    h1 = [r.D for r in recs if r.h == 1]
    h2 = [r.D for r in recs if r.h == 2]
    ok = tuple(h1) == paperdata.H1_LIST and (args.max_h < 2 or tuple(h2) == paperdata.H2_LIST)
    result = {"h1": h1, "rows": [{"D": r.D, "h": r.h} for r in recs], "matches_embedded": ok}
    if args.max_h == 2:
        result["h2"] = h2
    return result, ok


def _spot_values():
    from .modular import j_numeric, lambda2, weber_f1, weber_f2
    with mp.workprec(256):
        tau = mpmath.mpc(0, 1)
        lam = lambda2(tau)
        j = j_numeric(2 * tau)
        f1 = weber_f1(2 * tau) ** 24
        f2 = weber_f2(2 * tau) ** 24
        checks = {
            "lambda(2i)": (lam, 17 - 12 * mpmath.sqrt(2), 60),
            "j(2i)": (j, mpmath.mpf(287496), 60),
            "f1(2i)^24": (f1, mpmath.mpf(512), 40),
            "f2(2i)^24": (f2, -280 + 192 * mpmath.sqrt(2), 40),
            # the printed value is negative, f2(2i) is a positive real; the
            # root of x^2 + 560 x - 8 (from j and f1^24) is -280 + 198 sqrt(2)
            "f2(2i)^24 corrected": (f2, -280 + 198 * mpmath.sqrt(2), 40),
        }
        out = []
        for name, (got, want, digits) in checks.items():
            err = abs(got - want)
            got = mpmath.re(got) if mpmath.im(got) == 0 else got
            out.append({"name": name, "value": mpmath.nstr(got, digits + 2), "expected": mpmath.nstr(want, digits + 2),
                         "error": mpmath.nstr(err, 5), "digits": digits,
                        "ok": bool(err < mpmath.mpf(10) ** (-digits) * max(1, abs(want)))})
    return out


def cmd_lambda(args, cfg):
    from .modular import j_numeric, k_from_tau, lambda2
    if args.spot:
        out = _spot_values()
        return {"rows": out}, all(v["ok"] for v in out)
    tau = _tau_from_args(args)
    lam = lambda2(tau)
    res = {"tau": tau, "lambda_2tau": lam, "j_2tau": j_numeric(2 * tau)}
    try:
        res["k"] = k_from_tau(tau)
    except MahlerCMError:
        pass
    return res, True


def cmd_algdep(args, cfg):
    from .numerics import integer_relation
    from .expr import eval_k
    if args.triple:
        from .cmsearch import recognize_lambda
        from .quadforms import QuadForm
        poly = recognize_lambda(QuadForm(*_parse_triple(args.triple)), args.degree,
                                cfg.precision, args.coeff_bits)
    else:
        need = (args.degree + 1) * args.coeff_bits + 96
        with mp.workprec(max(cfg.precision, need)):
            poly = integer_relation(eval_k(args.value), args.degree, args.coeff_bits)
    found = poly is not None
    return {"polynomial": str(poly) if found else None,
            "coefficients": list(poly.coeffs) if found else None,
            "degree": poly.degree if found else None}, found


def cmd_mahler(args, cfg):
    from .expr import eval_k
    from .mahler import mahler_jensen, mahler_lattice
    from .modular import k_from_tau
    eps = mpmath.mpf(args.eps or cfg.eps["mahler"])
    res: Dict[str, Any] = {}
    if args.k:
        k = eval_k(args.k)
        res["k"] = k
        res["jensen"] = mahler_jensen(k, eps)
        return res, True
    tau = _tau_from_args(args)
    res["tau"] = tau
    res["k"] = k_from_tau(tau)
    res["lattice"] = mahler_lattice(tau, eps if args.strategy == "accelerated" else float(eps),
                                    args.strategy)
    if args.method in ("both", "jensen"):
        res["jensen"] = mahler_jensen(res["k"], eps)
        res["difference"] = abs(res["jensen"] - res["lattice"])
    return res, True


def _load_spec(text: str):
    from .lvalues import form_from_json
    p = Path(text)
    obj = json.loads(p.read_text() if p.exists() else text)
    return form_from_json(obj)


def cmd_lvalue(args, cfg):
    from .lvalues import F32, F64, find_row, lvalue2_report
    eps = float(args.eps or cfg.eps["lvalue"])
    if args.spec:
        spec = _load_spec(args.spec)
    elif args.row is not None:
        spec = find_row(args.row).form
    elif args.form:
        spec = {"f64": F64, "f32": F32}[args.form]
    else:
        raise DomainError("give --spec, --row or --form")
    rep = lvalue2_report(spec, eps, args.t0)
    return rep.to_dict(), True


def _verify_row(payload):
    key, eps, prec = payload
    from .lvalues import find_row, verify_identity
    mp.prec = prec
    return _jsonable(verify_identity(find_row(key), eps))


def _pool_map(fn, payloads: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, payloads))


def cmd_verify_identity(args, cfg):
    from .lvalues import identity_table
    eps = float(args.eps or cfg.eps["identity"])
    if args.all:
        keys = [str(r.index) for r in identity_table()]
    elif args.row is not None:
        keys = [args.row]
    else:
        raise DomainError("give --row <index|k> or --all")
    results = _pool_map(_verify_row, [(k, eps, cfg.precision) for k in keys], args.jobs)
    return {"rows": results, "passed": sum(r["ok"] for r in results), "total": len(results)}, \
        all(r["ok"] for r in results)


def sturm_checks() -> dict:
    from .lvalues import F32, F64
    from .qseries import (EtaQuotient, PowerSeriesZ, ThetaSpec, eta_quotient_expansion,
                          sturm_bound, sturm_compare, theta_expansion)
    order = 40
    f64 = eta_quotient_expansion(F64.body, order)
    f32 = eta_quotient_expansion(F32.body, order)
    th1 = theta_expansion(ThetaSpec(16, 0, 1, 0, 1, Fraction(1, 2)), order)
    th2 = theta_expansion(ThetaSpec(16, 16, 5, 8, 5, Fraction(1, 4)), order)
    checks = {
        "theta(16m^2+n^2) = (f64+f32)/2": sturm_compare(2 * th1, f64 + f32, 64, 2),
        "theta(16m^2+16mn+5n^2) = (f64-f32)/4": sturm_compare(4 * th2, f64 - f32, 64, 2),
        "f64 = f32": sturm_compare(f64, f32, 64, 2),
    }
    return {"bound": sturm_bound(64, 2), "checks": checks}


def cmd_sturm_check(args, cfg):
    out = sturm_checks()
    c = out["checks"]
    ok = (c["theta(16m^2+n^2) = (f64+f32)/2"]["equal"] and c["theta(16m^2+16mn+5n^2) = (f64-f32)/4"]["equal"]
          and not c["f64 = f32"]["equal"])
    if cfg.online or args.lmfdb:
        out["lmfdb"] = lmfdb_crosscheck(cfg)
    return out, ok


def _regulator_job(payload):
    cid, dps, full, tol = payload
    from .beilinson import regulator_case
    rep = regulator_case(cid, dps=dps, with_direct=True, full_matrix=full)
    d = rep.to_dict(full=True)
    d["ok"] = bool(rep.residual < tol and rep.details["direct_difference"] < 1e-6
                   and (not full or rep.details["direct_M2_difference"] < 1e-6))
    return d


def _isogeny_job(cid):
    from .beilinson import check_isogeny_identities
    return _jsonable(check_isogeny_identities(cid))


def _case_ids(arg: Optional[str]) -> List[str]:
    from .beilinson import CASE_IDS
    if arg is None or arg == "all":
        return list(CASE_IDS)
    if arg not in CASE_IDS:
        raise NotFound(f"unknown case {arg!r}; expected one of {', '.join(CASE_IDS)}")
    return [arg]


def _dps(cfg) -> int:
    return max(30, int(cfg.precision * 0.30103))


def cmd_regulator(args, cfg):
    tol = float(args.eps or cfg.eps["regulator"])
    ids = _case_ids(args.case)
    res = _pool_map(_regulator_job, [(c, _dps(cfg), args.full, tol) for c in ids], args.jobs)
    if not args.full:
        for d in res:
            d.pop("details", None)
    if len(res) == 1:
        return res[0], res[0]["ok"]
    return {"cases": res}, all(d["ok"] for d in res)


def cmd_check_all(args, cfg):
    tol = float(args.eps or cfg.eps["regulator"])
    out: Dict[str, Any] = {}
    ok = True
    if not args.cases:
        from .cmsearch import algorithm1, compare_table1
        cmp = compare_table1(algorithm1(emit_prec=cfg.precision))
        out["table1"] = {"matched": cmp.matched, "expected": cmp.expected, "ok": cmp.ok}
        r, good = cmd_class_numbers(argparse.Namespace(max_h=2, fundamental_bound=500), cfg)
        out["class_numbers"] = {"ok": good}
        out["sturm"] = {"ok": cmd_sturm_check(argparse.Namespace(lmfdb=False), cfg)[1]}
        ids, good = cmd_verify_identity(argparse.Namespace(all=True, row=None, eps=None, jobs=args.jobs), cfg)
        out["identities"] = {"passed": ids["passed"], "total": ids["total"],
                             "worst_residual": max((r["residual"] for r in ids["rows"]), key=float)}
        ok = ok and cmp.ok and out["class_numbers"]["ok"] and out["sturm"]["ok"] and good
    iso = _pool_map(_isogeny_job, _case_ids(None), args.jobs)
    regs = _pool_map(_regulator_job, [(c, _dps(cfg), False, tol) for c in _case_ids(None)], args.jobs)
    out["cases"] = [{"case": i["case"], "isogeny_ok": i["ok"], "regulator_residual": r["residual"],
                     "R": r["R"], "constant": r["constant"], "ok": bool(i["ok"] and r["ok"])}
                    for i, r in zip(iso, regs)]
    ok = ok and all(c["ok"] for c in out["cases"])
    return out, ok


def cmd_lmfdb_fetch(args, cfg):
    coeffs = lmfdb_fetch(args.label, cfg.cache_dir, cfg.online, args.nmax)
    if coeffs is None:
        return {"label": args.label, "status": "skipped", "reason": "offline and not cached"}, True
    return {"label": args.label, "coefficients": coeffs}, True


COMMANDS = {
    "cm-search": cmd_cm_search,
    "class-numbers": cmd_class_numbers,
    "lambda": cmd_lambda,
    "algdep": cmd_algdep,
    "mahler": cmd_mahler,
    "lvalue": cmd_lvalue,
    "verify-identity": cmd_verify_identity,
    "sturm-check": cmd_sturm_check,
    "regulator": cmd_regulator,
    "check-all": cmd_check_all,
    "lmfdb-fetch": cmd_lmfdb_fetch,
}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stdout.write(render({"schema": SCHEMA, "command": self.prog, "ok": False,
                                 "error": "usage", "message": message}, "json"))
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--precision", type=int, help="working precision in bits")
    common.add_argument("--cache-dir", dest="cache_dir")
    common.add_argument("--online", action="store_true", default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=1)

    p = _Parser(prog="mahlercm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("cm-search", parents=[common], help="CM points with h(D) h(D_4tau) <= 4")
    s.add_argument("--check-table1", action="store_true")
    s.add_argument("--search-prec", type=int, default=128)
    s.add_argument("--no-h4-filter", action="store_true")

    s = sub.add_parser("class-numbers", parents=[common], help="discriminants with class number 1 and 2")
    s.add_argument("--max-h", type=int, default=2)
    s.add_argument("--fundamental-bound", type=int, default=500)

    for name, helptext in (("lambda", "lambda(2 tau), j(2 tau) and k at a CM point"),
                           ("mahler", "Mahler measure by Jensen or the lattice sum")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--triple", help="form a,b,c")
        s.add_argument("--tau", help="tau as an expression, e.g. 2*I")
        if name == "lambda":
            s.add_argument("--spot", action="store_true", help="check the values at tau = i")
        else:
            s.add_argument("--k", help="k as an expression, e.g. 12+8*sqrt(2)")
            s.add_argument("--method", choices=("lattice", "jensen", "both"), default="both")
            s.add_argument("--strategy", choices=("accelerated", "direct"), default="accelerated")
            s.add_argument("--eps")

    s = sub.add_parser("algdep", parents=[common], help="integer polynomial vanishing at a value")
    s.add_argument("--value", help="numeric expression")
    s.add_argument("--triple", help="recognize lambda(2 tau) at the form a,b,c")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--coeff-bits", type=int, default=64)

    s = sub.add_parser("lvalue", parents=[common], help="L(f, 2) by the Mellin integral")
    s.add_argument("--spec", help="FormSpec JSON (inline or file path)")
    s.add_argument("--row", help="identity row index or k expression")
    s.add_argument("--form", choices=("f64", "f32"))
    s.add_argument("--eps")
    s.add_argument("--t0", type=float, default=0.15)

    s = sub.add_parser("verify-identity", parents=[common], help="m(k) against c_k L(f_k, 2)")
    s.add_argument("--row", help="row index or k expression")
    s.add_argument("--all", action="store_true")
    s.add_argument("--eps")

    s = sub.add_parser("sturm-check", parents=[common], help="exact q-expansion identities")
    s.add_argument("--lmfdb", action="store_true", help="also cross-check LMFDB (cache or --online)")

    s = sub.add_parser("regulator", parents=[common], help="regulator against const/pi^4 L L")
    s.add_argument("--case", default="all", help="6, 7.1, 7.2, 7.3, 7.4 or all")
    s.add_argument("--full", action="store_true", help="include intermediate integrals and M2 checks")
    s.add_argument("--eps", help="residual tolerance")

    s = sub.add_parser("check-all", parents=[common], help="every check in one run")
    s.add_argument("--cases", action="store_true", help="only the five regulator cases")
    s.add_argument("--eps", help="regulator residual tolerance")

    s = sub.add_parser("lmfdb-fetch", parents=[common], help="newform coefficients from LMFDB")
    s.add_argument("--label", required=True)
    s.add_argument("--nmax", type=int, default=25)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    fmt = args.format
    start = time.time()
    try:
        cfg = resolve_config(args.config, flags={"precision": args.precision, "cache_dir": args.cache_dir,
                                                 "online": args.online})
        paperdata.verify()
        mp.prec = cfg.precision
        result, ok = COMMANDS[args.command](args, cfg)
    except (MahlerCMError, ValueError, KeyError, OSError) as e:
        sys.stdout.write(render(error_doc(args.command, e), "json"))
        return 2
    doc = {"schema": SCHEMA, "command": args.command, "ok": bool(ok), "result": _jsonable(result),
           "metadata": {"precision": cfg.precision, "elapsed_s": round(time.time() - start, 3)}}
    sys.stdout.write(render(doc, fmt))
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
