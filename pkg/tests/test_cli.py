import io
import json
import urllib.error

import pytest

from mahlercm import cli
from mahlercm.errors import DomainError, NetworkError, NotFound

F64_TRACES = [0, 1, 0, 0, 0, 2, 0, 0, 0, -3, 0, 0, 0, -6, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, -1]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture(autouse=True)
def _isolated(tmp_path, monkeypatch):
    for key in ("PRECISION", "CACHE_DIR", "ONLINE", "CONFIG"):
        monkeypatch.delenv(cli.ENV_PREFIX + key, raising=False)
    monkeypatch.setenv(cli.ENV_PREFIX + "CACHE_DIR", str(tmp_path / "cache"))


def test_envelope(capsys):
    code, doc = run_json(capsys, "class-numbers")
    assert code == 0 and doc["ok"] and doc["schema"] == cli.SCHEMA and doc["command"] == "class-numbers"
    assert set(doc) == {"schema", "command", "ok", "result", "metadata"}
    assert doc["metadata"]["precision"] == 256


def test_deterministic_apart_from_metadata(capsys):
    _, a = run_json(capsys, "lambda", "--triple", "1,0,1")
    _, b = run_json(capsys, "lambda", "--triple", "1,0,1")
    a.pop("metadata"), b.pop("metadata")
    assert a == b


def test_cm_search_table1(capsys):
    code, doc = run_json(capsys, "cm-search", "--check-table1")
    assert code == 0 and doc["ok"]


def test_lambda_spot_reports_literal_mismatch(capsys):
    code, doc = run_json(capsys, "lambda", "--spot")
    names = {r["name"]: r["ok"] for r in doc["result"]["rows"]}
    assert code == 1 and not doc["ok"]
    assert names["f2(2i)^24"] is False and names["f2(2i)^24 corrected"] is True
    assert names["lambda(2i)"] and names["j(2i)"]


def test_algdep(capsys):
    code, doc = run_json(capsys, "algdep", "--value", "sqrt(2)+1", "--degree", "2")
    assert code == 0 and doc["result"]["coefficients"] in ([-1, -2, 1], [1, 2, -1])


def test_mahler(capsys):
    code, doc = run_json(capsys, "mahler", "--triple", "1,0,1", "--method", "both", "--precision", "128")
    assert code == 0 and doc["ok"]


def test_lvalue_and_verify(capsys):
    code, doc = run_json(capsys, "lvalue", "--form", "f64", "--eps", "1e-15")
    assert code == 0 and doc["result"]["L"].startswith("1.0231476520725")
    code, doc = run_json(capsys, "verify-identity", "--row", "4*sqrt(2)")
    assert code == 0 and doc["ok"]


def test_sturm_check(capsys):
    code, doc = run_json(capsys, "sturm-check")
    assert code == 0 and doc["ok"]


def test_regulator_case(capsys):
    code, doc = run_json(capsys, "regulator", "--case", "7.1")
    assert code == 0 and doc["ok"] and doc["result"]["case"] == "7.1"
    assert doc["result"]["multipliers"] == [-3, 1]


def test_csv_output(capsys):
    code, out = run(capsys, "class-numbers", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].split(",")[0] == "D" and len(lines) == 43


def test_error_exit_codes(capsys):
    code, doc = run_json(capsys, "regulator", "--case", "9")
    assert code == 2 and doc["error"] == "not_found" and not doc["ok"]
    code, doc = run_json(capsys, "lmfdb-fetch", "--label", "11.2.a.a")
    assert code == 2 and doc["error"] == "not_found"
    code, doc = run_json(capsys, "class-numbers", "--precision", "32")
    assert code == 2 and doc["error"] == "domain_error"
    code, doc = run_json(capsys, "nonsense")
    assert code == 2 and doc["error"] == "usage"


def test_config_layering(tmp_path):
    path = tmp_path / "mahlercm.conf"
    path.write_text("# comment\nprecision = 100\neps.mahler = 1e-20\n")
    assert cli.resolve_config(str(path), env={}).precision == 100
    env = {cli.ENV_PREFIX + "PRECISION": "200"}
    cfg = cli.resolve_config(str(path), env=env)
    assert cfg.precision == 200 and cfg.eps["mahler"] == "1e-20"
    assert cli.resolve_config(str(path), env=env, flags={"precision": 300}).precision == 300
    env[cli.ENV_PREFIX + "CONFIG"] = str(path)
    assert cli.resolve_config(None, env={cli.ENV_PREFIX + "CONFIG": str(path)}).precision == 100


def test_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("colour = blue\n")
    with pytest.raises(DomainError):
        cli.resolve_config(str(path), env={})


def _body(traces):
    return json.dumps({"data": [{"traces": traces}]})


def _never(*a, **k):
    raise AssertionError("network must not be used")


def test_lmfdb_cache_hit(tmp_path):
    cache = tmp_path / "lmfdb"
    cache.mkdir()
    (cache / "64.2.a.a.json").write_text(_body(F64_TRACES))
    got = cli.lmfdb_fetch("64.2.a.a", str(tmp_path), online=True, nmax=25, opener=_never)
    assert got == F64_TRACES[1:]


def test_lmfdb_offline_without_cache(tmp_path):
    assert cli.lmfdb_fetch("64.2.a.a", str(tmp_path), online=False, opener=_never) is None


class _Resp(io.BytesIO):
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def test_lmfdb_online_fetch_is_cached(tmp_path):
    calls = []

    def opener(url, timeout):
        calls.append(url)
        return _Resp(_body(F64_TRACES).encode())

    assert cli.lmfdb_fetch("64.2.a.a", str(tmp_path), True, 10, opener) == F64_TRACES[1:11]
    assert cli.lmfdb_fetch("64.2.a.a", str(tmp_path), True, 10, _never) == F64_TRACES[1:11]
    assert len(calls) == 1 and "64.2.a.a" in calls[0]


def test_lmfdb_network_error(tmp_path):
    def opener(url, timeout):
        raise urllib.error.URLError("unreachable")

    with pytest.raises(NetworkError):
        cli.lmfdb_fetch("32.2.a.a", str(tmp_path), True, opener=opener)


def test_lmfdb_rejects_hilbert_label(tmp_path):
    with pytest.raises(NotFound):
        cli.lmfdb_fetch("2.2.8.1-32.1-a8", str(tmp_path), True, opener=_never)


def test_lmfdb_crosscheck_with_cache(tmp_path):
    cache = tmp_path / "lmfdb"
    cache.mkdir()
    (cache / "64.2.a.a.json").write_text(_body(F64_TRACES))
    cfg = cli.Config(cache_dir=str(tmp_path))
    res = cli.lmfdb_crosscheck(cfg)
    assert res["f64"]["status"] == "match" and res["f32"]["status"] == "skipped"
