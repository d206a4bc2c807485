import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { describe, expect, it } from "vitest";

import { parseAudit, parseSnapshot, parseTimeseries,
  snapshotRadii } from "../src/schema";

const FIX = path.join(__dirname, "..", "fixtures", "bump_long");

function tmpFile(name: string, content: string): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "rp-"));
  const p = path.join(dir, name);
  fs.writeFileSync(p, content);
  return p;
}

describe("timeseries parsing", () => {
  it("reads the fixture records", () => {
    const recs = parseTimeseries(path.join(FIX, "timeseries.ndjson"));
    expect(recs.length).toBeGreaterThan(10);
    expect(recs[0].t).toBe(0);
    expect(recs[0].n).toBe(2);
    expect(recs.at(-1)!.t).toBeGreaterThan(1e6 - 1);
  });

  it("names a missing record field", () => {
    const recs = fs.readFileSync(path.join(FIX, "timeseries.ndjson"),
      "utf8").split("\n").filter((l) => l.trim());
    const obj = JSON.parse(recs[0]);
    delete obj.psi;
    const p = tmpFile("bad.ndjson", JSON.stringify(obj) + "\n" + recs[1]);
    expect(() => parseTimeseries(p)).toThrow(/missing field 'psi'/);
  });

  it("rejects unknown record fields", () => {
    const recs = fs.readFileSync(path.join(FIX, "timeseries.ndjson"),
      "utf8").split("\n").filter((l) => l.trim());
    const obj = JSON.parse(recs[0]);
    obj.bogus = 1;
    const p = tmpFile("bad2.ndjson", JSON.stringify(obj) + "\n" + recs[1]);
    expect(() => parseTimeseries(p)).toThrow(/unknown record field 'bogus'/);
  });

  it("tolerates one truncated final line", () => {
    const raw = fs.readFileSync(path.join(FIX, "timeseries.ndjson"), "utf8");
    const p = tmpFile("trunc.ndjson", raw.slice(0, raw.length - 50));
    const full = parseTimeseries(path.join(FIX, "timeseries.ndjson"));
    const part = parseTimeseries(p);
    expect(part.length).toBe(full.length - 1);
  });
});

describe("snapshot parsing", () => {
  const snapFile = fs.readdirSync(FIX).filter(
    (f) => f.startsWith("snapshot_")).sort()[0];

  it("reads a fixture snapshot", () => {
    const snap = parseSnapshot(path.join(FIX, snapFile));
    expect(snap.n).toBe(2);
    expect(snap.rows).toBe(64 * 64);
    const radii = snapshotRadii(snap);
    expect(Math.max(...radii)).toBeLessThanOrEqual(0.5 + 1e-12);
  });

  it("names a missing column", () => {
    const lines = fs.readFileSync(path.join(FIX, snapFile), "utf8")
      .split("\n");
    const header = lines[0].split(",");
    const drop = header.indexOf("S");
    const stripped = lines.filter((l) => l.trim()).map((line) =>
      line.split(",").filter((_, i) => i !== drop).join(","));
    const p = tmpFile("bad.csv", stripped.join("\n") + "\n");
    expect(() => parseSnapshot(p)).toThrow(/missing column 'S'/);
  });
});

describe("audit parsing", () => {
  it("reads the fixture audit", () => {
    const audit = parseAudit(path.join(FIX, "audit.json"));
    expect(audit.n).toBe(2);
    expect(audit.checks.length).toBeGreaterThan(5);
    expect(audit.fit.t_min).toBe(100);
    expect(audit.fit.t_max).toBe(1e6);
  });
});
