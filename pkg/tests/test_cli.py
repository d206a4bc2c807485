import json

import pytest

from coneflow import io
from coneflow.cli import main

CONFIG = """
n: 2
cone: {type: round, rho: 0.5}
mesh: {nr: 16, ntheta: 16}
time: {t_end: 0.25}
initial: {kind: radial_bump, k: 1.0, a: 0.05}
"""


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text(CONFIG)
    return str(p)


class TestRunCommand:
    def test_run_success_exit_zero(self, cfg_path, tmp_path, capsys):
        out = str(tmp_path / "out")
        rc = main(["run", "--config", cfg_path, "--out", out])
        assert rc == 0
        captured = capsys.readouterr().out
        assert "run complete" in captured
        report = io.read_audit(out + "/audit.json")
        assert report["passed"]

    def test_run_overrides(self, cfg_path, tmp_path):
        out = str(tmp_path / "out")
        rc = main(["run", "--config", cfg_path, "--out", out,
                   "--t-end", "0.1", "--resolution", "16"])
        assert rc == 0
        recs = io.read_timeseries(out + "/timeseries.ndjson")
        assert recs[-1].t == pytest.approx(0.1)

    def test_invalid_config_exit_two(self, tmp_path, capsys):
        p = tmp_path / "bad.yaml"
        p.write_text(CONFIG.replace("rho: 0.5", "rho: 1.5"))
        rc = main(["run", "--config", str(p)])
        assert rc == 2
        assert "unit ball" in capsys.readouterr().err

    def test_axisymmetric_flag(self, cfg_path, tmp_path):
        out = str(tmp_path / "axi")
        rc = main(["run", "--config", cfg_path, "--out", out,
                   "--axisymmetric"])
        assert rc == 0
        recs = io.read_timeseries(out + "/timeseries.ndjson")
        assert recs[0].n == 2


class TestHomotheticCommand:
    def test_exact_trajectory(self, tmp_path, capsys):
        out = str(tmp_path / "h")
        rc = main(["homothetic", "--k", "1.0", "--t-end", "4.0",
                   "--nr", "16", "--ntheta", "16", "--out", out])
        assert rc == 0
        recs = io.read_timeseries(out + "/timeseries.ndjson")
        assert all(abs(r.j_max) < 1e-15 for r in recs)


class TestReportCommand:
    def test_report_reproduces_audit(self, cfg_path, tmp_path, capsys):
        out = str(tmp_path / "out")
        main(["run", "--config", cfg_path, "--out", out])
        rc = main(["report", "--timeseries", out + "/timeseries.ndjson",
                   "--out", str(tmp_path / "audit2.json")])
        assert rc == 0
        a1 = io.read_audit(out + "/audit.json")
        a2 = io.read_audit(str(tmp_path / "audit2.json"))
        assert a1 == a2
