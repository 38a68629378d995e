import { levenbergMarquardt, linearFit } from "./leastSquares.js";
import type { ConvergenceFit, GradientFit, ScalingFit, SweepRow }
  from "./types.js";

/**
 * Below-threshold scaling pipeline.
 *
 * Only points with p < 0.8 p_th(N) and at least ten observed failures enter.
 * For each system size the slope of log P_fail against log(p / p_th) gives a
 * gradient g(d); regressing log g on log d yields alpha (intercept, at
 * d = 1) and beta (slope); the shared intercept of the per-size lines gives
 * (N+1) A.  Each per-cycle value is then fitted to the exponential
 * convergence form to extract its large-N limit.
 */
export function fitScaling(
  rows: SweepRow[],
  pThByN: Map<number, number>,
): ScalingFit {
  let used = 0;
  let discarded = 0;
  const byN = new Map<number, SweepRow[]>();
  for (const row of rows) {
    const pTh = pThByN.get(row.N);
    if (pTh === undefined) {
      discarded += 1;
      continue;
    }
    if (row.p >= 0.8 * pTh || row.failures < 10) {
      discarded += 1;
      continue;
    }
    used += 1;
    const bucket = byN.get(row.N) ?? [];
    bucket.push(row);
    byN.set(row.N, bucket);
  }

  const perN: GradientFit[] = [];
  for (const [N, bucket] of [...byN.entries()].sort((a, b) => a[0] - b[0])) {
    const pTh = pThByN.get(N)!;
    const byL = new Map<number, SweepRow[]>();
    for (const row of bucket) {
      const group = byL.get(row.L) ?? [];
      group.push(row);
      byL.set(row.L, group);
    }
    const gradients: GradientFit["gradients"] = [];
    const intercepts: { value: number; stderr: number }[] = [];
    for (const [L, group] of [...byL.entries()].sort((a, b) => a[0] - b[0])) {
      if (group.length < 2) continue;
      const u = group.map((r) => Math.log(r.p / pTh));
      // continuity-corrected log rate: log(k/n) is biased low by ~1/(2k)
      const y = group.map((r) =>
        Math.log((r.failures + 0.5) / (r.trials + 0.5)));
      // reweight from first-pass predictions, not the noisy observations:
      // weights built from observed rates correlate with the noise itself
      let line = linearFit(u, y);
      for (let pass = 0; pass < 2; pass++) {
        const sigma = group.map((r, i) => {
          const predicted = Math.min(
            0.99, Math.max(Math.exp(line.intercept + line.slope * u[i]),
                           0.5 / r.trials));
          return Math.sqrt((1 - predicted) / (predicted * r.trials));
        });
        line = linearFit(u, y, sigma);
      }
      gradients.push({ d: L + 2, g: line.slope, gStderr: line.slopeStderr });
      intercepts.push({ value: line.intercept,
                        stderr: line.interceptStderr });
    }
    if (gradients.length < 2) continue;
    const logd = gradients.map((g) => Math.log(g.d));
    const logg = gradients.map((g) => Math.log(g.g));
    const sigmaLogg = gradients.map((g) => g.gStderr / g.g);
    const line = linearFit(logd, logg, sigmaLogg);
    const alpha = Math.exp(line.intercept);
    const beta = line.slope;
    // the per-size intercepts all estimate log((N+1) A)
    let wsum = 0;
    let mean = 0;
    for (const it of intercepts) {
      const w = 1 / (it.stderr * it.stderr);
      wsum += w;
      mean += w * it.value;
    }
    mean /= wsum;
    const A = Math.exp(mean) / (N + 1);
    perN.push({
      N,
      alpha,
      alphaStderr: alpha * line.interceptStderr,
      beta,
      betaStderr: line.slopeStderr,
      A,
      AStderr: A / Math.sqrt(wsum),
      gradients,
    });
  }

  return {
    perN,
    alphaConvergence: convergence(perN.map((f) => [f.N, f.alpha, f.alphaStderr])),
    betaConvergence: convergence(perN.map((f) => [f.N, f.beta, f.betaStderr])),
    AConvergence: convergence(perN.map((f) => [f.N, f.A, f.AStderr])),
    pointsUsed: used,
    pointsDiscarded: discarded,
  };
}

function convergence(points: [number, number, number][]): ConvergenceFit | null {
  const usable = points.filter(([, v, s]) =>
    Number.isFinite(v) && Number.isFinite(s) && s > 0);
  if (usable.length < 3) return null;
  const xs = usable.map(([N]) => [N]);
  const ys = usable.map(([, v]) => v);
  const sigmas = usable.map(([, , s]) => s);
  const model = (params: number[], x: number[]) => {
    const [inf, zero, gamma] = params;
    return inf * (1 - (1 - zero / inf) * Math.exp(-gamma * x[0]));
  };
  const last = ys[ys.length - 1];
  const first = ys[0];
  let best: ReturnType<typeof levenbergMarquardt> | null = null;
  for (const gamma0 of [0.5, 1.0, 2.0]) {
    const fit = levenbergMarquardt(model, xs, ys, sigmas,
                                   [last, first, gamma0]);
    if (!Number.isFinite(fit.chi2)) continue;
    if (best === null || fit.chi2 < best.chi2) best = fit;
  }
  if (best === null) return null;
  return {
    inf: best.params[0],
    infStderr: best.stderr[0],
    zero: best.params[1],
    gamma: best.params[2],
  };
}
