/**
 * Figure renderer for solver run artifacts.
 *
 *   node dist/cli.js <figure|all> --timeseries ts.ndjson \
 *       --audit audit.json [--snapshots "dir/snapshot_*.csv"] --out figs/
 *
 * Figures: j_decay, envelope, hf_hull, osc_decay, profiles (profiles
 * requires --snapshots).
 */

import * as fs from "fs";
import * as path from "path";

import { FIGURES, FigureName, envelopeFigure, hfHullFigure, jDecayFigure,
  oscDecayFigure, profilesFigure } from "./figures";
import { parseAudit, parseSnapshot, parseTimeseries, Snapshot } from "./schema";

interface Args {
  figure: string;
  timeseries: string;
  audit: string;
  snapshots: string | null;
  out: string;
}

function parseArgs(argv: string[]): Args {
  const args: Args = { figure: "all", timeseries: "", audit: "",
    snapshots: null, out: "figures" };
  const rest: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--timeseries") args.timeseries = argv[++i];
    else if (a === "--audit") args.audit = argv[++i];
    else if (a === "--snapshots") args.snapshots = argv[++i];
    else if (a === "--out") args.out = argv[++i];
    else rest.push(a);
  }
  if (rest.length > 1) throw new Error(`unexpected arguments: ${rest}`);
  if (rest.length === 1) args.figure = rest[0];
  if (!args.timeseries) throw new Error("--timeseries is required");
  if (!args.audit) throw new Error("--audit is required");
  return args;
}

function globSnapshots(pattern: string): string[] {
  // supports a plain directory, a single file, or dir/prefix*.csv
  if (fs.existsSync(pattern) && fs.statSync(pattern).isDirectory()) {
    return fs.readdirSync(pattern)
      .filter((f) => f.startsWith("snapshot_") && f.endsWith(".csv"))
      .sort()
      .map((f) => path.join(pattern, f));
  }
  if (pattern.includes("*")) {
    const dir = path.dirname(pattern);
    const re = new RegExp("^"
      + path.basename(pattern).split("*").map(escapeRe).join(".*") + "$");
    return fs.readdirSync(dir).filter((f) => re.test(f)).sort()
      .map((f) => path.join(dir, f));
  }
  return [pattern];
}

function escapeRe(s: string): string {
  return s.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
}

function snapshotTime(file: string): number {
  const m = /_t([-0-9.e+]+)\.csv$/.exec(file);
  if (!m) throw new Error(`cannot read the snapshot time from '${file}'`);
  return Number(m[1]);
}

export function renderAll(args: Args): string[] {
  const records = parseTimeseries(args.timeseries);
  const audit = parseAudit(args.audit);
  fs.mkdirSync(args.out, { recursive: true });
  const wanted: FigureName[] = args.figure === "all"
    ? [...FIGURES]
    : [args.figure as FigureName];
  for (const f of wanted) {
    if (!(FIGURES as readonly string[]).includes(f)) {
      throw new Error(`unknown figure '${f}'; known: ${FIGURES.join(", ")}`);
    }
  }
  const written: string[] = [];
  const emit = (name: string, svg: string) => {
    const p = path.join(args.out, `${name}.svg`);
    fs.writeFileSync(p, svg);
    written.push(p);
  };
  for (const f of wanted) {
    if (f === "j_decay") {
      const { svg, fit } = jDecayFigure(records, audit);
      emit(f, svg);
      console.log(`j_decay fit: a=${fit.a} b=${fit.b} r2=${fit.r2}`);
    } else if (f === "envelope") {
      emit(f, envelopeFigure(records));
    } else if (f === "hf_hull") {
      emit(f, hfHullFigure(records));
    } else if (f === "osc_decay") {
      emit(f, oscDecayFigure(records));
    } else {
      if (!args.snapshots) {
        throw new Error("profiles figure requires --snapshots");
      }
      const files = globSnapshots(args.snapshots);
      if (!files.length) {
        throw new Error(`no snapshots match '${args.snapshots}'`);
      }
      const snaps: { t: number; snap: Snapshot }[] = files.map((file) => ({
        t: snapshotTime(file),
        snap: parseSnapshot(file),
      }));
      emit(f, profilesFigure(snaps, records));
    }
  }
  return written;
}

if (require.main === module) {
  try {
    const written = renderAll(parseArgs(process.argv.slice(2)));
    for (const p of written) console.log(`wrote ${p}`);
  } catch (e) {
    console.error(String(e instanceof Error ? e.message : e));
    process.exit(1);
  }
}
