import { levenbergMarquardt } from "./leastSquares.js";
import type { SustainableFit } from "./types.js";

export interface ThresholdPoint {
  N: number;
  pTh: number;
  stderr: number;
}

/**
 * Fit p_th(N) = pSus [1 - (1 - pTh(0)/pSus) exp(-gamma N)]: the limit pSus
 * is the sustainable error rate, the rate the code tolerates over
 * arbitrarily many correction cycles.
 */
export function fitSustainable(points: ThresholdPoint[]): SustainableFit {
  if (points.length < 4) {
    throw new Error(
      `sustainable-rate fit needs thresholds for at least 4 cycle counts, ` +
      `got ${points.length}`);
  }
  const sorted = [...points].sort((a, b) => a.N - b.N);
  const xs = sorted.map((pt) => [pt.N]);
  const ys = sorted.map((pt) => pt.pTh);
  const sigmas = sorted.map((pt) => Math.max(pt.stderr, 1e-9));
  const first = ys[0];
  const last = ys[ys.length - 1];

  const spread = Math.max(...ys) - Math.min(...ys);
  const scale = Math.max(...sigmas);
  if (spread < scale) {
    // flat series: pSus is just the constant level, gamma means nothing
    return {
      pSus: first,
      pSusStderr: sigmas[0],
      pTh0: first,
      gamma: NaN,
      gammaStderr: NaN,
      gammaUnconstrained: true,
    };
  }

  const model = (params: number[], x: number[]) => {
    const [pSus, pTh0, gamma] = params;
    return pSus * (1 - (1 - pTh0 / pSus) * Math.exp(-gamma * x[0]));
  };
  let best: ReturnType<typeof levenbergMarquardt> | null = null;
  for (const gamma0 of [0.5, 1.0, 2.0]) {
    const fit = levenbergMarquardt(
      model, xs, ys, sigmas, [last, first, gamma0]);
    if (!Number.isFinite(fit.chi2)) continue;
    if (best === null || fit.chi2 < best.chi2) best = fit;
  }
  if (best === null) {
    throw new Error("sustainable-rate fit did not converge");
  }
  return {
    pSus: best.params[0],
    pSusStderr: best.stderr[0],
    pTh0: best.params[1],
    gamma: best.params[2],
    gammaStderr: best.stderr[2],
    gammaUnconstrained: false,
  };
}
