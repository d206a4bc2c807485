"""Command-line interface: run, verify, homothetic, report."""

import argparse
import os
import sys

from . import diagnostics, io, runner
from .config import parse_config
from .engine import StepControl
from .errors import ConfigError
from .mesh import build_mesh


def _cmd_run(args):
    try:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
    except ConfigError as e:
        print(str(e), file=sys.stderr)
        return 2
    if args.t_end is not None:
        cfg.t_end = args.t_end
    if args.resolution is not None:
        cfg.nr = args.resolution
        cfg.ntheta = args.resolution
    if args.axisymmetric:
        cfg.axisymmetric = True
    outdir = args.out or cfg.out_dir
    records, report, paths = runner.run_from_config(cfg, outdir=outdir)
    for line in report.summary_lines():
        print(line)
    print(f"run complete: {len(records)} records -> {outdir}")
    return 0 if report.passed else 1


def _cmd_verify(args):
    from .acceptance import run_all
    results = run_all(outdir=args.out, verbose=True)
    ok = all(r.passed or r.expected_fail for r in results)
    hard_ok = all(r.passed for r in results)
    print()
    for r in results:
        print(r.line())
    if ok and not hard_ok:
        print("expected-fail criteria did fail as analyzed; all others pass")
    return 0 if hard_ok else 1


def _cmd_homothetic(args):
    from .cone import ConeSpec
    spec = ConeSpec.round(args.rho, args.n)
    axi = args.axisymmetric or args.n > 2
    mesh = build_mesh(spec, args.nr, args.ntheta, axisymmetric=axi)
    ctl = StepControl(t_end=args.t_end, snapshot_t0=args.snapshot_t0,
                      snapshot_factor=args.snapshot_factor)
    records, report, paths = runner.homothetic_from_args(
        mesh, args.k, ctl, outdir=args.out)
    for line in report.summary_lines():
        print(line)
    print(f"homothetic trajectory: {len(records)} records -> {args.out}")
    return 0 if report.passed else 1


def _cmd_report(args):
    records = io.read_timeseries(args.timeseries)
    if len(records) < 2:
        print("timeseries holds fewer than two records", file=sys.stderr)
        return 2
    report = diagnostics.audit(records)
    for line in report.summary_lines():
        print(line)
    if args.out:
        io.ensure_dir(os.path.dirname(args.out) or ".")
        io.write_audit(args.out, report)
        print(f"audit written to {args.out}")
    return 0 if report.passed else 1


def main(argv=None):
    p = argparse.ArgumentParser(
        prog="coneflow",
        description="Spacelike mean curvature flow inside a convex cone")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("run", help="simulate a configured run")
    pr.add_argument("--config", required=True, help="YAML/JSON run config")
    pr.add_argument("--out", default=None, help="output directory override")
    pr.add_argument("--t-end", type=float, default=None, dest="t_end")
    pr.add_argument("--resolution", type=int, default=None,
                    help="override nr (and ntheta in 2-D)")
    pr.add_argument("--axisymmetric", action="store_true")
    pr.set_defaults(fn=_cmd_run)

    pv = sub.add_parser("verify", help="execute the acceptance suite")
    pv.add_argument("--out", default="verify_out",
                    help="directory for run artifacts")
    pv.set_defaults(fn=_cmd_verify)

    ph = sub.add_parser("homothetic",
                        help="emit the exact expanding-solution trajectory")
    ph.add_argument("--k", type=float, default=1.0)
    ph.add_argument("--n", type=int, default=2)
    ph.add_argument("--rho", type=float, default=0.5)
    ph.add_argument("--t-end", type=float, default=100.0, dest="t_end")
    ph.add_argument("--nr", type=int, default=64)
    ph.add_argument("--ntheta", type=int, default=64)
    ph.add_argument("--snapshot-t0", type=float, default=0.0625)
    ph.add_argument("--snapshot-factor", type=float, default=2.0)
    ph.add_argument("--axisymmetric", action="store_true")
    ph.add_argument("--out", default="homothetic_out")
    ph.set_defaults(fn=_cmd_homothetic)

    pp = sub.add_parser("report", help="recompute the audit from a timeseries")
    pp.add_argument("--timeseries", required=True)
    pp.add_argument("--out", default=None, help="audit JSON path")
    pp.set_defaults(fn=_cmd_report)

    args = p.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
