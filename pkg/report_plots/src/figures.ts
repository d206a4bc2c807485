/**
 * The five report figures, each a pure function from parsed artifacts
 * to an SVG string.
 */

import { fitJDecay, FitResult } from "./fit";
import { Audit, DiagnosticsRecord, Snapshot, snapshotRadii } from "./schema";
import { renderPlot } from "./svg";

export const FIGURES = ["j_decay", "envelope", "hf_hull", "osc_decay",
  "profiles"] as const;
export type FigureName = (typeof FIGURES)[number];

export function jDecayFigure(
  records: DiagnosticsRecord[], audit: Audit,
): { svg: string; fit: FitResult } {
  const n = records[0].n;
  const t = records.map((r) => r.t);
  const j = records.map((r) => r.j_max);
  const fit = fitJDecay(t, j, n, audit.fit.t_min, audit.fit.t_max);
  const tPos = t.filter((v) => v > 0);
  const fitCurve = tPos.map((v) => fit.a / Math.log(fit.b + 2 * n * v));
  const a3 = fit.a.toPrecision(3);
  const b3 = fit.b.toPrecision(3);
  const svg = renderPlot({
    title: "Gradient defect decay",
    xLabel: "t",
    yLabel: "max J",
    xLog: true,
    yLog: true,
    series: [
      { x: tPos, y: records.filter((r) => r.t > 0).map((r) => r.j_max),
        label: "max J", color: "#1f77b4" },
      { x: tPos, y: fitCurve,
        label: `fit a/log(b+2nt), a=${a3}, b=${b3}, `
          + `r2=${fit.r2.toPrecision(3)}`,
        color: "#d62728", dash: "5 3" },
    ],
  });
  return { svg, fit };
}

export function envelopeFigure(records: DiagnosticsRecord[]): string {
  const t = records.map((r) => r.t);
  return renderPlot({
    title: "Envelope: F² - 2nt stays between its initial bounds",
    xLabel: "t",
    yLabel: "F² - 2nt",
    xLog: true,
    series: [
      { x: t.filter((v) => v > 0),
        y: records.filter((r) => r.t > 0).map((r) => r.f2_shift_max),
        label: "max", color: "#1f77b4" },
      { x: t.filter((v) => v > 0),
        y: records.filter((r) => r.t > 0).map((r) => r.f2_shift_min),
        label: "min", color: "#2ca02c" },
    ],
    bands: [{
      x: t.filter((v) => v > 0),
      yLow: records.filter((r) => r.t > 0).map((r) => r.f2_shift_min),
      yHigh: records.filter((r) => r.t > 0).map((r) => r.f2_shift_max),
      label: "hull", color: "#9edae5",
    }],
    hLines: [
      { y: records[0].f2_shift_max, label: "initial max", color: "#7f7f7f" },
      { y: records[0].f2_shift_min, label: "initial min", color: "#bcbd22" },
    ],
  });
}

export function hfHullFigure(records: DiagnosticsRecord[]): string {
  const pos = records.filter((r) => r.t > 0);
  const n = records[0].n;
  return renderPlot({
    title: "Mean curvature times height",
    xLabel: "t",
    yLabel: "H F",
    xLog: true,
    series: [
      { x: pos.map((r) => r.t), y: pos.map((r) => r.hf_max),
        label: "max HF", color: "#1f77b4" },
      { x: pos.map((r) => r.t), y: pos.map((r) => r.hf_min),
        label: "min HF", color: "#2ca02c" },
      { x: pos.map((r) => r.t), y: pos.map((r) => r.mean_hf),
        label: "area mean", color: "#9467bd", dash: "2 3" },
    ],
    hLines: [{ y: n, label: `n = ${n}`, color: "#d62728" }],
  });
}

export function oscDecayFigure(records: DiagnosticsRecord[]): string {
  const pos = records.filter((r) => r.t > 0 && r.osc_psi_u > 0);
  return renderPlot({
    title: "Oscillation of the renormalized height",
    xLabel: "t",
    yLabel: "osc(ψ u)",
    xLog: true,
    yLog: true,
    series: [{
      x: pos.map((r) => r.t), y: pos.map((r) => r.osc_psi_u),
      label: "osc(ψ u)", color: "#1f77b4",
    }],
  });
}

export function profilesFigure(
  snapshots: { t: number; snap: Snapshot }[],
  records: DiagnosticsRecord[],
): string {
  if (!snapshots.length) throw new Error("profiles figure needs snapshots");
  const palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2"];
  const series = snapshots.map(({ t, snap }, i) => {
    // snapshot filenames carry 6 significant digits of t
    let rec = records[0];
    for (const r of records) {
      if (Math.abs(r.t - t) < Math.abs(rec.t - t)) rec = r;
    }
    if (Math.abs(rec.t - t) > 1e-4 * Math.max(1, t)) {
      throw new Error(`no record at snapshot time t=${t}`);
    }
    const radii = snapshotRadii(snap);
    const u = snap.columns.u;
    const order = [...radii.keys()].sort((a, b) => radii[a] - radii[b]);
    return {
      x: order.map((k) => radii[k]),
      y: order.map((k) => rec.psi * u[k]),
      label: `t = ${t}`,
      color: palette[i % palette.length],
    };
  });
  const last = series[series.length - 1];
  const limit = last.y.reduce((s, v) => s + v, 0) / last.y.length;
  return renderPlot({
    title: "Renormalized profiles ψ u(x)",
    xLabel: "|x|",
    yLabel: "ψ u",
    series,
    hLines: [{ y: limit, label: "limit height", color: "#444" }],
  });
}
