"""Orchestration: config -> mesh -> run -> artifacts on disk."""

import os

from . import diagnostics, engine, io


def snapshot_name(index, t):
    return f"snapshot_{index:03d}_t{t:.6g}.csv"


def run_from_config(cfg, outdir=None, write_files=True):
    """Execute one configured run; returns (records, audit_report, paths).

    Writes snapshot tables per output time, a streaming record file and
    the audit document under the output directory.
    """
    outdir = outdir or cfg.out_dir
    mesh = cfg.build_mesh()
    field = cfg.initial_field(mesh)
    ctl = cfg.step_control()

    paths = {"snapshots": []}
    writer = None
    if write_files:
        io.ensure_dir(outdir)
        paths["timeseries"] = os.path.join(outdir, "timeseries.ndjson")
        writer = io.TimeseriesWriter(paths["timeseries"])

    records = []
    index = [0]

    def diagnose(f):
        return diagnostics.record(f, interior_fraction=cfg.interior_fraction)

    def on_snapshot(f, rec):
        records.append(rec)
        if writer is not None:
            writer.write(rec)
        if write_files and cfg.write_snapshots:
            p = os.path.join(outdir, snapshot_name(index[0], f.t))
            io.write_snapshot(p, f)
            paths["snapshots"].append(p)
        index[0] += 1

    runner = engine.run_axisymmetric if mesh.axisymmetric else engine.run
    try:
        runner(field, ctl, diagnose=diagnose, on_snapshot=on_snapshot)
    finally:
        if writer is not None:
            writer.close()

    report = diagnostics.audit(records)
    if write_files:
        paths["audit"] = os.path.join(outdir, "audit.json")
        io.write_audit(paths["audit"], report)
    return records, report, paths


def homothetic_from_args(mesh, k, ctl, outdir=None, write_files=True):
    """Emit the exact expanding-solution trajectory and its audit."""
    paths = {"snapshots": []}
    writer = None
    if write_files:
        io.ensure_dir(outdir)
        paths["timeseries"] = os.path.join(outdir, "timeseries.ndjson")
        writer = io.TimeseriesWriter(paths["timeseries"])
    records = []
    index = [0]

    def on_snapshot(f, rec):
        records.append(rec)
        if writer is not None:
            writer.write(rec)
        if write_files:
            p = os.path.join(outdir, snapshot_name(index[0], f.t))
            io.write_snapshot(p, f)
            paths["snapshots"].append(p)
        index[0] += 1

    try:
        engine.homothetic_trajectory(mesh, k, ctl,
                                     diagnose=diagnostics.record,
                                     on_snapshot=on_snapshot)
    finally:
        if writer is not None:
            writer.close()
    report = diagnostics.audit(records)
    if write_files:
        paths["audit"] = os.path.join(outdir, "audit.json")
        io.write_audit(paths["audit"], report)
    return records, report, paths
