import json
import os

import numpy as np
import pytest

from coneflow import io, runner
from coneflow.config import parse_config
from coneflow.diagnostics import record
from coneflow.engine import StepControl
from coneflow.errors import ConfigError
from coneflow.mesh import Field, build_mesh
from coneflow.cone import ConeSpec

MINIMAL = """
n: 2
cone: {type: round, rho: 0.5}
mesh: {nr: 16, ntheta: 16}
time: {t_end: 0.25}
initial: {kind: radial_bump, k: 1.0, a: 0.05}
"""


class TestParse:
    def test_minimal_defaults(self):
        cfg = parse_config(MINIMAL)
        assert cfg.safety == 0.25
        assert cfg.snapshot_factor == 2.0
        assert cfg.interior_fraction == 0.5
        assert not cfg.axisymmetric
        mesh = cfg.build_mesh()
        assert mesh.shape == (16, 16)
        field = cfg.initial_field(mesh)
        # innermost ring sits half a spacing off the origin
        assert field.u.max() == pytest.approx(
            1.0 + 0.05 * np.cos(np.pi * mesh.sigma[0]))
        assert field.u.min() == pytest.approx(0.95)

    def test_unknown_keys_strict(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(MINIMAL + "\nbogus_key: 1\n")
        assert any("bogus_key" in v for v in exc.value.violations)

    def test_rho_outside_ball(self):
        bad = MINIMAL.replace("rho: 0.5", "rho: 1.2")
        with pytest.raises(ConfigError) as exc:
            parse_config(bad)
        assert any("open unit ball" in v for v in exc.value.violations)

    def test_all_violations_enumerated(self):
        bad = """
n: 1
cone: {type: round, rho: 1.2}
mesh: {nr: 4, ntheta: 7}
time: {t_end: -1, safety: 2.0}
initial: {kind: radial_bump, k: -1.0, a: 0.05}
"""
        with pytest.raises(ConfigError) as exc:
            parse_config(bad)
        assert len(exc.value.violations) >= 5

    def test_spacelike_violation_names_node(self):
        bad = MINIMAL.replace("a: 0.05", "a: 0.2")
        with pytest.raises(ConfigError) as exc:
            parse_config(bad)
        msg = "\n".join(exc.value.violations)
        assert "not spacelike" in msg and "node" in msg

    def test_angular_mode_config(self):
        text = MINIMAL.replace("kind: radial_bump, k: 1.0, a: 0.05",
                               "kind: angular_mode, k: 1.0, a: 0.04, m: 2")
        cfg = parse_config(text)
        field = cfg.initial_field()
        assert field.u.shape == (16, 16)

    def test_n3_requires_axisymmetric(self):
        bad = MINIMAL.replace("n: 2", "n: 3")
        with pytest.raises(ConfigError) as exc:
            parse_config(bad)
        assert any("axisymmetric" in v for v in exc.value.violations)

    def test_json_document_accepted(self):
        cfg = parse_config(json.dumps({
            "n": 2, "cone": {"type": "round", "rho": 0.5},
            "mesh": {"nr": 16, "ntheta": 16},
            "time": {"t_end": 0.1},
            "initial": {"kind": "constant", "k": 1.0}}))
        assert cfg.k == 1.0


class TestSnapshotIO:
    def field(self, tmp_path):
        m = build_mesh(ConeSpec.round(0.5), 16, 16)
        u = (1.0 + 0.05 * np.cos(np.pi * m.sigma))[:, None] * np.ones((1, 16))
        return Field(mesh=m, u=u, t=0.5)

    def test_round_trip_bit_identical(self, tmp_path):
        f = self.field(tmp_path)
        p = tmp_path / "snap.csv"
        io.write_snapshot(p, f)
        data = io.read_snapshot(p)
        assert np.array_equal(data["u"], f.u.ravel())
        io.write_snapshot(tmp_path / "snap2.csv", f)
        assert (tmp_path / "snap.csv").read_bytes() == \
            (tmp_path / "snap2.csv").read_bytes()

    def test_homothetic_snapshot_J_zero(self, tmp_path):
        m = build_mesh(ConeSpec.round(0.5), 16, 16)
        f = Field(mesh=m, u=np.full((16, 16), 2.0), t=0.0)
        p = tmp_path / "snap.csv"
        io.write_snapshot(p, f)
        data = io.read_snapshot(p)
        assert np.abs(data["J"]).max() < 1e-10
        assert set(data) == {"node_id", "x1", "x2", "u", "v", "S", "H",
                             "A2", "J"}


class TestTimeseriesIO:
    def records(self):
        m = build_mesh(ConeSpec.round(0.5), 16, 16)
        out = []
        for t in (0.0, 0.5, 1.0):
            u = np.full((16, 16), np.sqrt(1 + 4 * t))
            out.append(record(Field(mesh=m, u=u, t=t)))
        return out

    def test_round_trip(self, tmp_path):
        recs = self.records()
        p = tmp_path / "ts.ndjson"
        io.write_timeseries(p, recs)
        back = io.read_timeseries(p)
        assert back == recs

    def test_truncated_final_line_tolerated(self, tmp_path):
        recs = self.records()
        p = tmp_path / "ts.ndjson"
        io.write_timeseries(p, recs)
        raw = p.read_text()
        p.write_text(raw[:-40])       # chop the last record mid-line
        back = io.read_timeseries(p)
        assert back == recs[:-1]

    def test_audit_reproduced_from_file(self, tmp_path):
        from coneflow.diagnostics import audit
        recs = self.records()
        p = tmp_path / "ts.ndjson"
        io.write_timeseries(p, recs)
        direct = audit(recs)
        from_file = audit(io.read_timeseries(p))
        assert direct.to_dict() == from_file.to_dict()


class TestRunnerDeterminism:
    def test_identical_configs_byte_identical_outputs(self, tmp_path):
        cfg_text = MINIMAL
        outs = []
        for name in ("a", "b"):
            cfg = parse_config(cfg_text)
            outdir = tmp_path / name
            runner.run_from_config(cfg, outdir=str(outdir))
            outs.append(outdir)
        for fname in sorted(os.listdir(outs[0])):
            ba = (outs[0] / fname).read_bytes()
            bb = (outs[1] / fname).read_bytes()
            assert ba == bb, fname

    def test_run_writes_expected_artifacts(self, tmp_path):
        cfg = parse_config(MINIMAL)
        records, report, paths = runner.run_from_config(
            cfg, outdir=str(tmp_path / "out"))
        assert os.path.exists(paths["timeseries"])
        assert os.path.exists(paths["audit"])
        assert len(paths["snapshots"]) == len(records)
        assert report.passed

    def test_homothetic_runner(self, tmp_path):
        mesh = build_mesh(ConeSpec.round(0.5), 16, 16)
        ctl = StepControl(t_end=2.0, snapshot_t0=0.5)
        records, report, paths = runner.homothetic_from_args(
            mesh, 1.0, ctl, outdir=str(tmp_path / "h"))
        assert report.passed
        assert all(abs(r.j_max) < 1e-15 for r in records)


class TestExampleConfigs:
    def test_committed_configs_parse(self):
        import glob
        paths = sorted(glob.glob(
            os.path.join(os.path.dirname(__file__), "..", "configs",
                         "*.yaml")))
        assert len(paths) >= 3
        for p in paths:
            with open(p) as fh:
                cfg = parse_config(fh.read())
            assert cfg.t_end > 0
