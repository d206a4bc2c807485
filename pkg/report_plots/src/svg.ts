/** Minimal dependency-free SVG line/band plotting. */

export interface Series {
  x: number[];
  y: number[];
  label: string;
  color: string;
  dash?: string;
}

export interface Band {
  x: number[];
  yLow: number[];
  yHigh: number[];
  label: string;
  color: string;
}

export interface PlotSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  bands?: Band[];
  hLines?: { y: number; label: string; color: string }[];
  xLog?: boolean;
  yLog?: boolean;
  width?: number;
  height?: number;
}

const M = { left: 72, right: 24, top: 40, bottom: 52 };

function ticks(lo: number, hi: number, log: boolean): number[] {
  if (log) {
    const out: number[] = [];
    const e0 = Math.ceil(Math.log10(lo) - 1e-9);
    const e1 = Math.floor(Math.log10(hi) + 1e-9);
    for (let e = e0; e <= e1; e++) out.push(Math.pow(10, e));
    if (out.length >= 2) return out;
  }
  const span = hi - lo;
  if (span <= 0) return [lo];
  const step = Math.pow(10, Math.floor(Math.log10(span / 4)));
  const mult = span / step > 8 ? 2 : 1;
  const out: number[] = [];
  for (let v = Math.ceil(lo / (step * mult)) * step * mult;
       v <= hi + 1e-12 * span; v += step * mult) {
    out.push(v);
  }
  return out;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0);
  return String(Math.round(v * 1e6) / 1e6);
}

export function renderPlot(spec: PlotSpec): string {
  const W = spec.width ?? 720;
  const H = spec.height ?? 440;
  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of spec.series) {
    for (let i = 0; i < s.x.length; i++) {
      if (spec.xLog && s.x[i] <= 0) continue;
      if (spec.yLog && s.y[i] <= 0) continue;
      xs.push(s.x[i]);
      ys.push(s.y[i]);
    }
  }
  for (const b of spec.bands ?? []) {
    for (let i = 0; i < b.x.length; i++) {
      if (spec.xLog && b.x[i] <= 0) continue;
      xs.push(b.x[i]);
      ys.push(b.yLow[i], b.yHigh[i]);
    }
  }
  for (const h of spec.hLines ?? []) ys.push(h.y);
  if (!xs.length || !ys.length) {
    throw new Error(`figure '${spec.title}': nothing to plot`);
  }
  const tx = (v: number) => (spec.xLog ? Math.log10(v) : v);
  const ty = (v: number) => (spec.yLog ? Math.log10(v) : v);
  let x0 = Math.min(...xs);
  let x1 = Math.max(...xs);
  let y0 = Math.min(...ys);
  let y1 = Math.max(...ys);
  if (spec.yLog) y0 = Math.max(y0, 1e-300);
  if (x0 === x1) { x0 -= 1; x1 += 1; }
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const pad = spec.yLog ? Math.pow(y1 / y0, 0.05) : 0.05 * (y1 - y0);
  const ylo = spec.yLog ? y0 / pad : y0 - pad;
  const yhi = spec.yLog ? y1 * pad : y1 + pad;

  const px = (v: number) =>
    M.left + ((tx(v) - tx(x0)) / (tx(x1) - tx(x0))) * (W - M.left - M.right);
  const py = (v: number) =>
    H - M.bottom - ((ty(v) - ty(ylo)) / (ty(yhi) - ty(ylo)))
      * (H - M.top - M.bottom);

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${W}" `
    + `height="${H}" viewBox="0 0 ${W} ${H}">`);
  parts.push(`<rect width="${W}" height="${H}" fill="white"/>`);
  parts.push(`<text x="${W / 2}" y="22" text-anchor="middle" `
    + `font-family="sans-serif" font-size="15">${spec.title}</text>`);

  for (const v of ticks(x0, x1, !!spec.xLog)) {
    const X = px(v);
    parts.push(`<line x1="${X}" y1="${M.top}" x2="${X}" `
      + `y2="${H - M.bottom}" stroke="#ddd"/>`);
    parts.push(`<text x="${X}" y="${H - M.bottom + 18}" `
      + `text-anchor="middle" font-family="sans-serif" font-size="11">`
      + `${fmt(v)}</text>`);
  }
  for (const v of ticks(ylo, yhi, !!spec.yLog)) {
    const Y = py(v);
    parts.push(`<line x1="${M.left}" y1="${Y}" x2="${W - M.right}" `
      + `y2="${Y}" stroke="#ddd"/>`);
    parts.push(`<text x="${M.left - 6}" y="${Y + 4}" text-anchor="end" `
      + `font-family="sans-serif" font-size="11">${fmt(v)}</text>`);
  }
  parts.push(`<rect x="${M.left}" y="${M.top}" `
    + `width="${W - M.left - M.right}" height="${H - M.top - M.bottom}" `
    + `fill="none" stroke="#444"/>`);
  parts.push(`<text x="${W / 2}" y="${H - 14}" text-anchor="middle" `
    + `font-family="sans-serif" font-size="12">${spec.xLabel}</text>`);
  parts.push(`<text x="18" y="${H / 2}" text-anchor="middle" `
    + `font-family="sans-serif" font-size="12" `
    + `transform="rotate(-90 18 ${H / 2})">${spec.yLabel}</text>`);

  for (const b of spec.bands ?? []) {
    const fwd = b.x.map((v, i) => `${px(v)},${py(b.yHigh[i])}`);
    const back = [...b.x.keys()].reverse()
      .map((i) => `${px(b.x[i])},${py(b.yLow[i])}`);
    parts.push(`<polygon points="${fwd.concat(back).join(" ")}" `
      + `fill="${b.color}" fill-opacity="0.25" stroke="none"/>`);
  }
  for (const s of spec.series) {
    const pts: string[] = [];
    for (let i = 0; i < s.x.length; i++) {
      if (spec.xLog && s.x[i] <= 0) continue;
      if (spec.yLog && s.y[i] <= 0) continue;
      pts.push(`${px(s.x[i])},${py(Math.max(s.y[i], spec.yLog ? ylo : -Infinity))}`);
    }
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(`<polyline points="${pts.join(" ")}" fill="none" `
      + `stroke="${s.color}" stroke-width="1.6"${dash}/>`);
  }
  for (const hl of spec.hLines ?? []) {
    const Y = py(hl.y);
    parts.push(`<line x1="${M.left}" y1="${Y}" x2="${W - M.right}" `
      + `y2="${Y}" stroke="${hl.color}" stroke-dasharray="6 3"/>`);
  }

  const legendItems = [
    ...spec.series.map((s) => ({ label: s.label, color: s.color })),
    ...(spec.bands ?? []).map((b) => ({ label: b.label, color: b.color })),
    ...(spec.hLines ?? []).map((h) => ({ label: h.label, color: h.color })),
  ];
  legendItems.forEach((item, i) => {
    const Y = M.top + 14 + 16 * i;
    parts.push(`<line x1="${W - M.right - 150}" y1="${Y - 4}" `
      + `x2="${W - M.right - 126}" y2="${Y - 4}" stroke="${item.color}" `
      + `stroke-width="2"/>`);
    parts.push(`<text x="${W - M.right - 120}" y="${Y}" `
      + `font-family="sans-serif" font-size="11">${item.label}</text>`);
  });
  parts.push("</svg>");
  return parts.join("\n");
}
