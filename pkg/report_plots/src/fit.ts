/**
 * Decay-law fit of 1/(max J) against log(b + 2nt): slope-only least
 * squares per candidate offset b, with b located on a fixed logarithmic
 * grid and refined by golden section.  Mirrors the solver's own fit
 * step for step so the reported parameters agree to full precision.
 */

export interface FitResult {
  a: number;
  b: number;
  r2: number;
  nPoints: number;
}

export function fitJDecay(
  tvals: number[], jvals: number[], n: number,
  tMin: number | null, tMax: number | null,
): FitResult {
  const t: number[] = [];
  const y: number[] = [];
  for (let i = 0; i < tvals.length; i++) {
    if (tvals[i] <= 0 || jvals[i] <= 0) continue;
    if (tMin !== null && tvals[i] < tMin * (1 - 1e-12)) continue;
    if (tMax !== null && tvals[i] > tMax * (1 + 1e-12)) continue;
    t.push(tvals[i]);
    y.push(1.0 / jvals[i]);
  }
  if (t.length < 3) {
    return { a: NaN, b: NaN, r2: 0.0, nPoints: t.length };
  }

  const sse = (b: number): [number, number] => {
    let sxx = 0.0;
    let sxy = 0.0;
    for (let i = 0; i < t.length; i++) {
      const x = Math.log(b + 2 * n * t[i]);
      sxx += x * x;
      sxy += x * y[i];
    }
    const m = sxy / sxx;
    let s = 0.0;
    for (let i = 0; i < t.length; i++) {
      const r = y[i] - m * Math.log(b + 2 * n * t[i]);
      s += r * r;
    }
    return [s, m];
  };

  const grid: number[] = [];
  for (let k = 0; k < 121; k++) {
    grid.push(Math.pow(10, -3 + (12 * k) / 120));
  }
  let best = 0;
  let bestVal = Infinity;
  grid.forEach((b, k) => {
    const [s] = sse(b);
    if (s < bestVal) {
      bestVal = s;
      best = k;
    }
  });
  const lo = grid[Math.max(best - 1, 0)];
  const hi = grid[Math.min(best + 1, grid.length - 1)];

  const gr = (Math.sqrt(5) - 1) / 2;
  let a_ = Math.log(lo);
  let b_ = Math.log(hi);
  let c_ = b_ - gr * (b_ - a_);
  let d_ = a_ + gr * (b_ - a_);
  let [fc] = sse(Math.exp(c_));
  let [fd] = sse(Math.exp(d_));
  for (let it = 0; it < 80; it++) {
    if (fc < fd) {
      b_ = d_;
      d_ = c_;
      fd = fc;
      c_ = b_ - gr * (b_ - a_);
      [fc] = sse(Math.exp(c_));
    } else {
      a_ = c_;
      c_ = d_;
      fc = fd;
      d_ = a_ + gr * (b_ - a_);
      [fd] = sse(Math.exp(d_));
    }
  }
  const bBest = Math.exp(0.5 * (a_ + b_));
  const [bestSse, m] = sse(bBest);
  let ybar = 0.0;
  for (const v of y) ybar += v;
  ybar /= y.length;
  let sstot = 0.0;
  for (const v of y) sstot += (v - ybar) * (v - ybar);
  const r2 = sstot > 0 ? 1 - bestSse / sstot : 0.0;
  return { a: m !== 0 ? 1 / m : NaN, b: bBest, r2, nPoints: t.length };
}

/** Round to a given number of significant digits. */
export function sigDigits(x: number, digits: number): number {
  if (!isFinite(x) || x === 0) return x;
  const mag = Math.ceil(Math.log10(Math.abs(x)));
  const scale = Math.pow(10, digits - mag);
  return Math.round(x * scale) / scale;
}
