import json
import os
import subprocess
import sys

import pytest

from oscillorm import cli
from oscillorm.errors import ConfigError
from oscillorm.report import ReportRecord, SCHEMA, read_csv, summarize, write_csv

SMALL = {
    "families": [[1, 1, 1]],
    "points": [[0.5, 0.5]],
    "ladder": [32, 48, 64, 96],
    "seeds": [0],
}


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(dict(SMALL, output=str(tmp_path / "out.csv"))))
    return path


def test_sweep_writes_csv_and_summary(small_config, tmp_path, capsys):
    assert cli.main(["sweep", "--config", str(small_config)]) == 0
    text = (tmp_path / "out.csv").read_text()
    assert text.startswith(f"# schema={SCHEMA}\n")
    rows = read_csv(text)
    assert len(rows) == 4 and all(r.status == "ok" for r in rows)
    summary = json.loads((tmp_path / "out.json").read_text())
    assert summary["passed"] and summary["rows"] == 4 and summary["schema"] == SCHEMA
    assert "PASS" in capsys.readouterr().out


def test_sweep_is_byte_identical_on_rerun(small_config, tmp_path):
    cli.main(["sweep", "--config", str(small_config)])
    first = (tmp_path / "out.csv").read_bytes(), (tmp_path / "out.json").read_bytes()
    cli.main(["sweep", "--config", str(small_config)])
    assert ((tmp_path / "out.csv").read_bytes(), (tmp_path / "out.json").read_bytes()) == first


def test_pool_path_matches_serial(small_config, tmp_path, monkeypatch):
    cli.main(["sweep", "--config", str(small_config), "--output", str(tmp_path / "serial.csv")])
    monkeypatch.setattr(os, "cpu_count", lambda: 2)
    monkeypatch.setenv("OSCILLORM_THREADS", "2")
    cli.main(["sweep", "--config", str(small_config), "--output", str(tmp_path / "pool.csv")])
    assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "pool.csv").read_bytes()


def test_overrides_take_precedence(small_config, tmp_path):
    out = tmp_path / "over.csv"
    code = cli.main(["sweep", "--config", str(small_config), f"--output={out}",
                     "--points=[[0.5,0.5],[1,1]]"])
    assert code == 0 and len(read_csv(out.read_text())) == 8


def test_fit_reproduces_summary(small_config, tmp_path, capsys):
    cli.main(["sweep", "--config", str(small_config)])
    capsys.readouterr()
    assert cli.main(["fit", str(tmp_path / "out.csv")]) == 0
    assert json.loads(capsys.readouterr().out) == json.loads((tmp_path / "out.json").read_text())


def test_under_resolved_cell_fails_with_exit_1(small_config, tmp_path):
    code = cli.main(["sweep", "--config", str(small_config), "--resolution.points_per_period=4"])
    rows = read_csv((tmp_path / "out.csv").read_text())
    assert code == 1 and rows and all(r.status == "failed" for r in rows)
    assert not json.loads((tmp_path / "out.json").read_text())["passed"]


@pytest.mark.parametrize("flag", ["--ladder=[]", "--ladder=[64,32]", "--colour=1", "--resolution.depth=3",
                                  "--families=[[3,1,1]]", "--workers=0", "noflag"])
def test_bad_config_exits_2(small_config, flag):
    assert cli.main(["sweep", "--config", str(small_config), flag]) == 2


def test_bad_threads_env_exits_2(small_config, monkeypatch):
    monkeypatch.setenv("OSCILLORM_THREADS", "many")
    assert cli.main(["sweep", "--config", str(small_config)]) == 2


def test_worker_count_caps(monkeypatch):
    monkeypatch.setattr(os, "cpu_count", lambda: 8)
    monkeypatch.setenv("OSCILLORM_THREADS", "3")
    assert cli.worker_count(None, 100) == 3
    assert cli.worker_count(2, 100) == 2
    assert cli.worker_count(None, 1) == 1
    monkeypatch.delenv("OSCILLORM_THREADS")
    assert cli.worker_count(None, 100) == 8


def test_missing_config_file_exits_2(tmp_path):
    assert cli.main(["sweep", "--config", str(tmp_path / "nope.json")]) == 2


def test_unknown_suite_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "astrology"])
    assert exc.value.code == 2


def test_exponent_command(capsys):
    assert cli.main(["exponent", "1", "2", "2", "0.5", "0.5"]) == 0
    assert float(capsys.readouterr().out) == 0.25


def test_exponent_rejects_bad_point():
    assert cli.main(["exponent", "1", "1", "1", "1.5", "0.5"]) == 2


def test_fit_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("module,operation\n")
    assert cli.main(["fit", str(bad)]) == 2
    bad.write_text("# schema=99\n")
    assert cli.main(["fit", str(bad)]) == 2
    assert cli.main(["fit", str(tmp_path / "absent.csv")]) == 2


@pytest.mark.parametrize("suite", ["phase", "kernels"])
def test_verify_suite_passes(suite, tmp_path):
    out = tmp_path / f"{suite}.csv"
    assert cli.main(["verify", suite, "--output", str(out)]) == 0
    summary = json.loads(out.with_suffix(".json").read_text())
    assert summary["passed"] and summary["checks"]
    assert summarize(read_csv(out.read_text())) == summary


def test_csv_roundtrip_keeps_values(tmp_path):
    recs = [ReportRecord("opnorm", "norm_bounds", "j1k1n1", 64.0, 0.5, 0.5, lower=0.1 + 0.2,
                         upper=1 / 3, ratio=0.9, seed=3),
            ReportRecord("phase", "fresnel", N=10.0, lower=1e-300)]
    path = tmp_path / "r.csv"
    with open(path, "w", newline="") as fh:
        write_csv(recs, fh)
    assert read_csv(path.read_text()) == recs


def test_record_rejects_non_finite():
    with pytest.raises(ValueError):
        ReportRecord("phase", "fresnel", lower=float("nan"))


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "oscillorm.cli", "exponent", "2", "2", "1", "0", "1"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0 and float(proc.stdout) == pytest.approx(0.25)


def test_config_error_type():
    with pytest.raises(ConfigError):
        cli.apply_overrides(cli.DEFAULT_CONFIG, ["--nope=1"])
