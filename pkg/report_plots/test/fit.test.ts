import * as path from "path";
import { describe, expect, it } from "vitest";

import { fitJDecay, sigDigits } from "../src/fit";
import { parseAudit, parseTimeseries } from "../src/schema";

const FIX = path.join(__dirname, "..", "fixtures", "bump_long");

describe("decay-law fit", () => {
  it("recovers synthetic 1/log parameters", () => {
    const n = 2;
    const a = 3.7;
    const b = 55.0;
    const t: number[] = [];
    const j: number[] = [];
    for (let k = 0; k < 25; k++) {
      const tv = 1e2 * Math.pow(1e4, k / 24);
      t.push(tv);
      j.push(a / Math.log(b + 2 * n * tv));
    }
    const fit = fitJDecay(t, j, n, 1e2, 1e6);
    expect(fit.r2).toBeGreaterThan(0.999999);
    expect(Math.abs(fit.a - a) / a).toBeLessThan(1e-3);
  });

  it("matches the solver audit fit to 3 significant digits", () => {
    const records = parseTimeseries(path.join(FIX, "timeseries.ndjson"));
    const audit = parseAudit(path.join(FIX, "audit.json"));
    const fit = fitJDecay(records.map((r) => r.t),
      records.map((r) => r.j_max), records[0].n,
      audit.fit.t_min, audit.fit.t_max);
    expect(fit.nPoints).toBe(audit.fit.n_points);
    expect(sigDigits(fit.r2, 3)).toBe(sigDigits(audit.fit.r2, 3));
    if (audit.fit.a !== null && audit.fit.b !== null) {
      expect(sigDigits(fit.a, 3)).toBe(sigDigits(audit.fit.a, 3));
      expect(sigDigits(fit.b, 3)).toBe(sigDigits(audit.fit.b, 3));
    }
  });

  it("needs at least three points", () => {
    const fit = fitJDecay([1, 2], [0.1, 0.1], 2, null, null);
    expect(fit.nPoints).toBe(2);
    expect(Number.isNaN(fit.a)).toBe(true);
  });
});
