/**
 * Parsers for the solver's output artifacts: newline-delimited record
 * streams, snapshot tables and audit documents.  Every mismatch against
 * the expected schema fails with an error naming the offending field.
 */

import * as fs from "fs";

export const RECORD_FIELDS = [
  "t", "n", "f2_shift_min", "f2_shift_max", "hf_min", "hf_max",
  "hsf2_min", "hsf2_max", "j_max", "h_min", "area", "psi",
  "psi_u_min", "psi_u_max", "osc_psi_u", "mean_hf", "integral_residual",
  "interior_a2f2_max", "r_f2", "r_hs", "r_h", "max_inv_v2",
  "max_inv_u2", "max_u2", "min_v", "min_u", "steps",
] as const;

export type DiagnosticsRecord = Record<(typeof RECORD_FIELDS)[number], number>;

export const SNAPSHOT_COLUMNS = ["node_id", "u", "v", "S", "H", "A2", "J"];

export interface Snapshot {
  columns: Record<string, Float64Array>;
  n: number; // chart dimension (number of x columns)
  rows: number;
}

export interface AuditFit {
  a: number | null;
  b: number | null;
  r2: number;
  n_points: number;
  t_min: number | null;
  t_max: number | null;
}

export interface Audit {
  n: number;
  passed: boolean;
  checks: { name: string; passed: boolean; margin: number; details: string }[];
  fit: AuditFit;
}

export function parseTimeseries(path: string): DiagnosticsRecord[] {
  const text = fs.readFileSync(path, "utf8");
  const records: DiagnosticsRecord[] = [];
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  lines.forEach((line, idx) => {
    let obj: Record<string, unknown>;
    try {
      obj = JSON.parse(line);
    } catch (e) {
      // an interrupted run may leave one truncated final line
      if (idx === lines.length - 1) return;
      throw new Error(`${path}:${idx + 1}: unparseable record line`);
    }
    for (const field of RECORD_FIELDS) {
      if (!(field in obj) || typeof obj[field] !== "number") {
        throw new Error(
          `${path}:${idx + 1}: record is missing field '${field}'`);
      }
    }
    const extra = Object.keys(obj).filter(
      (k) => !(RECORD_FIELDS as readonly string[]).includes(k));
    if (extra.length) {
      throw new Error(
        `${path}:${idx + 1}: unknown record field '${extra[0]}'`);
    }
    records.push(obj as unknown as DiagnosticsRecord);
  });
  if (!records.length) throw new Error(`${path}: no records`);
  return records;
}

export function parseSnapshot(path: string): Snapshot {
  const text = fs.readFileSync(path, "utf8");
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  const header = lines[0].split(",");
  const xCols = header.filter((h) => /^x\d+$/.test(h));
  for (const required of SNAPSHOT_COLUMNS) {
    if (!header.includes(required)) {
      throw new Error(`${path}: missing column '${required}'`);
    }
  }
  if (xCols.length === 0) {
    throw new Error(`${path}: missing column 'x1'`);
  }
  const rows = lines.length - 1;
  const columns: Record<string, Float64Array> = {};
  for (const name of header) columns[name] = new Float64Array(rows);
  for (let r = 0; r < rows; r++) {
    const parts = lines[r + 1].split(",");
    if (parts.length !== header.length) {
      throw new Error(`${path}: row ${r} has ${parts.length} fields, `
        + `header has ${header.length}`);
    }
    for (let c = 0; c < header.length; c++) {
      columns[header[c]][r] = Number(parts[c]);
    }
  }
  return { columns, n: xCols.length, rows };
}

export function parseAudit(path: string): Audit {
  const obj = JSON.parse(fs.readFileSync(path, "utf8"));
  for (const field of ["n", "passed", "checks", "fit"]) {
    if (!(field in obj)) {
      throw new Error(`${path}: audit is missing field '${field}'`);
    }
  }
  return obj as Audit;
}

/** Euclidean radius |x| per snapshot row. */
export function snapshotRadii(snap: Snapshot): Float64Array {
  const out = new Float64Array(snap.rows);
  for (let d = 1; d <= snap.n; d++) {
    const col = snap.columns[`x${d}`];
    for (let r = 0; r < snap.rows; r++) out[r] += col[r] * col[r];
  }
  for (let r = 0; r < snap.rows; r++) out[r] = Math.sqrt(out[r]);
  return out;
}
