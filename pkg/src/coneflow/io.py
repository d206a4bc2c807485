"""Bit-stable output artifacts: snapshot tables, record streams, audits."""

import json
import os

import numpy as np

from . import kernels
from .diagnostics import DiagnosticsRecord


def snapshot_header(n):
    coords = ",".join(f"x{i + 1}" for i in range(n))
    return f"node_id,{coords},u,v,S,H,A2,J"


def write_snapshot(path, field):
    """One row per node: node_id, coordinates, u, v, S, H, A2, J.

    17 significant digits (exact float64 round trip), deterministic
    node-id order, so identical runs produce byte-identical files.
    """
    mesh = field.mesh
    g = kernels.geometry_fields(field)
    xy = mesh.node_xy()
    cols = [field.u.ravel(), g["v"].ravel(), g["S"].ravel(),
            g["H"].ravel(), g["A2"].ravel(), g["J"].ravel()]
    with open(path, "w") as fh:
        fh.write(snapshot_header(mesh.n) + "\n")
        for node in range(mesh.n_nodes):
            vals = [f"{xy[node, d]:.17g}" for d in range(mesh.n)]
            vals += [f"{c[node]:.17g}" for c in cols]
            fh.write(f"{node}," + ",".join(vals) + "\n")
    return path


def read_snapshot(path):
    """Parse a snapshot table back into a dict of column arrays."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    data = np.array([[float(v) for v in row] for row in rows])
    if data.shape[1] != len(header):
        raise ValueError(f"snapshot {path}: row width does not match header")
    return {name: data[:, k] for k, name in enumerate(header)}


def write_timeseries(path, records, append=False):
    """Newline-delimited records, one JSON object per line, flushed per
    line so an interrupted run stays parseable up to the last complete
    record."""
    mode = "a" if append else "w"
    with open(path, mode) as fh:
        for rec in records:
            d = rec.to_dict() if isinstance(rec, DiagnosticsRecord) else rec
            fh.write(json.dumps(d, sort_keys=True) + "\n")
            fh.flush()
    return path


class TimeseriesWriter:
    """Streaming single-writer appender for long runs."""

    def __init__(self, path):
        self.path = path
        self._fh = open(path, "w")

    def write(self, rec):
        d = rec.to_dict() if isinstance(rec, DiagnosticsRecord) else rec
        self._fh.write(json.dumps(d, sort_keys=True) + "\n")
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_timeseries(path):
    """Parse a record stream; a truncated final line is tolerated."""
    records = []
    with open(path) as fh:
        lines = fh.readlines()
    for idx, line in enumerate(lines):
        line = line.strip()
        if not line:
            continue
        try:
            records.append(DiagnosticsRecord.from_dict(json.loads(line)))
        except (json.JSONDecodeError, ValueError):
            if idx == len(lines) - 1:
                break
            raise
    return records


def write_audit(path, report):
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_audit(path):
    with open(path) as fh:
        return json.load(fh)


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path
