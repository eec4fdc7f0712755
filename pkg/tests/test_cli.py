import csv
import math
import subprocess
import sys

import pytest

from squeezent import cli

LN2 = math.log(2)


def rows(path):
    with open(path, encoding="utf-8") as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


@pytest.mark.parametrize("x,text", [
    (0.0, "0"),
    (1.0, "1"),
    (0.261624071882274, "0.261624071882"),
    (3.2e-5, "3.2e-05"),
    (123456789.123, "123456789.123"),
    (math.inf, "inf"),
])
def test_number_format(x, text):
    assert cli.fmt(x) == text


def test_fig1_small_grid(tmp_path):
    out = tmp_path / "fig1.csv"
    assert cli.main(["fig1", "--chi-min", "1", "--chi-max", "10", "--points", "10", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("# squeezent")
    assert "chi,tau,S,E,lnchi,deltaS" in text
    r = rows(out)
    assert len(r) == 10
    assert r[0]["deltaS"] == "0" and r[0]["tau"] == "inf"
    assert float(r[1]["chi"]) == 2.0
    assert float(r[1]["deltaS"]) == pytest.approx(0.26165, abs=1e-4)
    for row in r:
        assert float(row["deltaS"]) == pytest.approx(float(row["S"]) - float(row["lnchi"]), abs=1e-11)


def test_fig1_defaults_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["fig1", "--out", str(a)])
    cli.main(["fig1", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    r = rows(a)
    assert len(r) == 200
    assert float(r[0]["chi"]) == 1 and float(r[-1]["chi"]) == 50
    chis = [float(x["chi"]) for x in r]
    assert all(x < y for x, y in zip(chis, chis[1:]))


def test_fig1_log_grid_asymptote(tmp_path):
    out = tmp_path / "log.csv"
    cli.main(["fig1", "--chi-min", "1", "--chi-max", "1e4", "--points", "50", "--spacing", "log",
              "--out", str(out)])
    last = rows(out)[-1]
    assert float(last["chi"]) == 1e4
    assert float(last["deltaS"]) == pytest.approx(1 - LN2, abs=1e-3)


@pytest.mark.parametrize("args", [
    ["--chi-min", "5", "--chi-max", "2"],
    ["--chi-min", "0.5"],
    ["--points", "1"],
])
def test_fig1_invalid_grid(args, capsys):
    assert cli.main(["fig1", *args]) == 2
    assert "error" in capsys.readouterr().err


def test_unwritable_path(tmp_path):
    assert cli.main(["fig1", "--out", str(tmp_path / "missing" / "x.csv")]) == 2


def test_curves_both_parametrizations(tmp_path):
    out = tmp_path / "curves.csv"
    cli.main(["curves", "--tau", f"{LN2!r},50", "--chi", "3", "--out", str(out)])
    r = rows(out)
    assert [float(x["chi"]) for x in r][::2] == [pytest.approx(3.0), pytest.approx(3.0)]
    for row in (r[0], r[2]):
        assert float(row["S_tau"]) == pytest.approx(2 * LN2, abs=1e-11)
        assert float(row["E_tau"]) == pytest.approx(1.0, abs=1e-11)
        assert float(row["S_chi"]) == pytest.approx(2 * LN2, abs=1e-11)
    assert float(r[1]["S_tau"]) < 1e-18 and float(r[1]["E_tau"]) < 1e-18


def test_curves_rejects_bad_tau():
    assert cli.main(["curves", "--tau", "-1"]) == 2


def test_psi_compare(tmp_path):
    out = tmp_path / "psi.csv"
    cli.main(["psi-compare", "--n-max", "20", "--out", str(out)])
    r = rows(out)
    assert r[0]["N"] == "2"
    d = [float(x["deltaS"]) for x in r]
    assert d[0] == pytest.approx(0.26165, abs=1e-4)
    assert all(v > 0 for v in d)
    assert d[0] < d[1] < 1 - LN2


def test_psi_compare_rejects():
    assert cli.main(["psi-compare", "--n-max", "1"]) == 2


def test_verify_grassmann_summary(tmp_path, capsys):
    summary = tmp_path / "summary.tsv"
    assert cli.main(["verify", "grassmann", "--summary", str(summary)]) == 0
    lines = summary.read_text().splitlines()
    assert lines
    for line in lines:
        name, status, residual, tol = line.split("\t")
        assert status == "pass" and float(residual) == 0.0
    assert "overall: pass" in capsys.readouterr().out


def test_verify_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "quantum"])
    assert exc.value.code == 2


def test_verify_exit_on_failure(monkeypatch):
    from squeezent.verify import Check, run_checks

    def fake(suite, **kw):
        return [run_checks("x", [Check("broken", lambda: 1.0, 0.0)])]

    monkeypatch.setattr(cli, "run_suite", fake)
    assert cli.main(["verify"]) == 1


def test_config_precedence(monkeypatch):
    seen = {}

    def fake(suite, seed, samples, cutoff):
        seen.update(suite=suite, seed=seed, samples=samples, cutoff=cutoff)
        return []

    monkeypatch.setattr(cli, "run_suite", fake)
    monkeypatch.setenv("SQZ_SEED", "11")
    monkeypatch.setenv("SQZ_DEFAULT_CUTOFF", "14")
    cli.main(["verify", "maxent"])
    assert seen == {"suite": "maxent", "seed": 11, "samples": 200, "cutoff": 14}
    cli.main(["verify", "--suite", "maxent", "--seed", "3", "--cutoff", "9", "--samples", "5"])
    assert seen == {"suite": "maxent", "seed": 3, "samples": 5, "cutoff": 9}
    monkeypatch.delenv("SQZ_SEED")
    monkeypatch.delenv("SQZ_DEFAULT_CUTOFF")
    cli.main(["verify", "boson"])
    assert seen["seed"] == 7 and seen["cutoff"] is None


def test_bad_env_is_config_error(monkeypatch):
    monkeypatch.setenv("SQZ_SEED", "seven")
    assert cli.main(["verify", "grassmann"]) == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.csv"
    proc = subprocess.run([sys.executable, "-m", "squeezent", "fig1", "--points", "3", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert len(rows(out)) == 3
