import { levenbergMarquardt } from "./leastSquares.js";
import type { SweepRow, ThresholdFit } from "./types.js";

/**
 * Locate the threshold crossing for one cycle count by fitting
 * P_fail = B0 + B1 x + B2 x^2 with x = (p - pTh) L^(1/mu).
 *
 * The fit window (which error rates count as "close to the crossing") is an
 * explicit, reported parameter; by default every supplied point is used.
 */
export function fitThreshold(
  rows: SweepRow[],
  window?: { pMin?: number; pMax?: number },
): ThresholdFit {
  const pMin = (window?.pMin ?? -Infinity) - 1e-9;
  const pMax = (window?.pMax ?? Infinity) + 1e-9;
  const used = rows.filter((r) => r.p >= pMin && r.p <= pMax);
  const sizes = new Set(used.map((r) => r.L));
  const ps = [...new Set(used.map((r) => r.p))].sort((a, b) => a - b);
  if (sizes.size < 3) {
    throw new Error(
      `threshold fit needs at least 3 system sizes, got ${sizes.size}: ` +
      "no crossing is identifiable from a single size");
  }
  if (ps.length < 4) {
    throw new Error(`threshold fit needs at least 4 error rates, got ${ps.length}`);
  }

  const xs = used.map((r) => [r.L, r.p]);
  const ys = used.map((r) => r.p_fail);
  const sigmas = used.map((r) => Math.max(r.stderr, 0.5 / r.trials));
  const model = (params: number[], x: number[]) => {
    const [pTh, mu, b0, b1, b2] = params;
    const u = (x[1] - pTh) * Math.pow(x[0], 1 / mu);
    return b0 + b1 * u + b2 * u * u;
  };

  const median = ps[Math.floor(ps.length / 2)];
  const yMid = ys.reduce((s, v) => s + v, 0) / ys.length;
  const slope0 = estimateSlope(xs, ys);
  let best: ReturnType<typeof levenbergMarquardt> | null = null;
  let bestInWindow: ReturnType<typeof levenbergMarquardt> | null = null;
  for (const p0 of [median, median * 0.85, median * 1.15, ps[1]]) {
    for (const mu0 of [0.7, 1.0, 1.5]) {
      for (const b1 of [slope0, slope0 / 3]) {
        const fit = levenbergMarquardt(
          model, xs, ys, sigmas, [p0, mu0, yMid, b1, 0]);
        if (!Number.isFinite(fit.chi2)) continue;
        if (best === null || fit.chi2 < best.chi2) best = fit;
        const inWindow = fit.params[0] >= ps[0]
          && fit.params[0] <= ps[ps.length - 1];
        if (inWindow && (bestInWindow === null
            || fit.chi2 < bestInWindow.chi2)) {
          bestInWindow = fit;
        }
      }
    }
  }
  if (best === null) {
    throw new Error("threshold fit did not converge from any start");
  }
  if (bestInWindow === null) {
    const pTh = best.params[0];
    throw new Error(
      `fitted crossing ${pTh.toExponential(3)} lies outside the data window ` +
      `[${ps[0]}, ${ps[ps.length - 1]}]: no crossing in range`);
  }
  best = bestInWindow;
  const [pTh, mu, b0, b1, b2] = best.params;
  return {
    pTh,
    pThStderr: best.stderr[0],
    mu,
    muStderr: best.stderr[1],
    B: [b0, b1, b2],
    chi2: best.chi2,
    dof: best.dof,
    window: { pMin: ps[0], pMax: ps[ps.length - 1] },
  };
}

export const AUTO_WINDOW_HALFWIDTH = 0.0015;

/**
 * Windowed crossing fit: the quadratic form only holds near the crossing,
 * so pick a center from a significance scan of the large-vs-small-size
 * failure gap, fit within a half-width of it, and re-center once.
 */
export function fitThresholdAuto(
  rows: SweepRow[],
  halfwidth: number = AUTO_WINDOW_HALFWIDTH,
): ThresholdFit {
  let center = crossingCenter(rows);
  let result: ThresholdFit | null = null;
  for (let pass = 0; pass < 3; pass++) {
    let fit: ThresholdFit;
    try {
      fit = fitThreshold(rows,
        { pMin: center - halfwidth, pMax: center + halfwidth });
    } catch {
      break;
    }
    result = fit;
    if (Math.abs(fit.pTh - center) < 1e-5) break;
    center = fit.pTh;
  }
  return result ?? fitThreshold(rows);
}

function crossingCenter(rows: SweepRow[]): number {
  const ps = [...new Set(rows.map((r) => r.p))].sort((a, b) => a - b);
  const sizes = [...new Set(rows.map((r) => r.L))].sort((a, b) => a - b);
  const lo = sizes[0];
  const hi = sizes[sizes.length - 1];
  let lastNotAbove = ps[0];
  for (const p of ps) {
    const big = rows.find((r) => r.L === hi && r.p === p);
    const small = rows.find((r) => r.L === lo && r.p === p);
    if (!big || !small) continue;
    const gap = big.p_fail - small.p_fail;
    const noise = Math.hypot(big.stderr, small.stderr) || 1e-9;
    if (gap / noise > 2.0) return 0.5 * (lastNotAbove + p);
    lastNotAbove = p;
  }
  return ps[ps.length - 1];
}

function estimateSlope(xs: number[][], ys: number[]): number {
  // crude dP/dp averaged over sizes, as a starting B1
  let num = 0;
  let den = 0;
  for (let i = 1; i < xs.length; i++) {
    if (xs[i][0] === xs[i - 1][0] && xs[i][1] !== xs[i - 1][1]) {
      num += (ys[i] - ys[i - 1]) / (xs[i][1] - xs[i - 1][1])
        / Math.pow(xs[i][0], 1.0);
      den += 1;
    }
  }
  return den ? Math.max(1, num / den) : 20;
}
