/**
 * Weighted nonlinear least squares via Levenberg-Marquardt with a numeric
 * Jacobian.  Parameter standard errors come from the curvature at the
 * optimum (inverse of J^T W J), treating the supplied sigmas as absolute.
 */

export interface FitOutcome {
  params: number[];
  stderr: number[];
  chi2: number;
  dof: number;
  converged: boolean;
}

export type Model = (params: number[], x: number[]) => number;

export function solveLinear(A: number[][], b: number[]): number[] | null {
  const n = b.length;
  const M = A.map((row, i) => [...row, b[i]]);
  for (let col = 0; col < n; col++) {
    let pivot = col;
    for (let r = col + 1; r < n; r++) {
      if (Math.abs(M[r][col]) > Math.abs(M[pivot][col])) pivot = r;
    }
    if (Math.abs(M[pivot][col]) < 1e-300) return null;
    [M[col], M[pivot]] = [M[pivot], M[col]];
    for (let r = 0; r < n; r++) {
      if (r === col) continue;
      const f = M[r][col] / M[col][col];
      for (let c = col; c <= n; c++) M[r][c] -= f * M[col][c];
    }
  }
  return M.map((row, i) => row[n] / M[i][i]);
}

function chiSquared(model: Model, xs: number[][], ys: number[],
                    sigmas: number[], params: number[]): number {
  let total = 0;
  for (let i = 0; i < ys.length; i++) {
    const r = (model(params, xs[i]) - ys[i]) / sigmas[i];
    total += r * r;
  }
  return total;
}

function jacobian(model: Model, xs: number[][], params: number[]): number[][] {
  const np = params.length;
  const J: number[][] = xs.map(() => new Array(np).fill(0));
  for (let k = 0; k < np; k++) {
    const h = Math.max(1e-7, Math.abs(params[k]) * 1e-6);
    const up = [...params];
    const dn = [...params];
    up[k] += h;
    dn[k] -= h;
    for (let i = 0; i < xs.length; i++) {
      J[i][k] = (model(up, xs[i]) - model(dn, xs[i])) / (2 * h);
    }
  }
  return J;
}

export function levenbergMarquardt(
  model: Model,
  xs: number[][],
  ys: number[],
  sigmas: number[],
  initial: number[],
  options: { maxIterations?: number; tolerance?: number } = {},
): FitOutcome {
  const maxIterations = options.maxIterations ?? 200;
  const tolerance = options.tolerance ?? 1e-10;
  const np = initial.length;
  let params = [...initial];
  let lambda = 1e-3;
  let chi2 = chiSquared(model, xs, ys, sigmas, params);
  let converged = false;

  for (let iter = 0; iter < maxIterations; iter++) {
    const J = jacobian(model, xs, params);
    // normal equations J^T W J and J^T W r
    const JtJ: number[][] = Array.from({ length: np },
      () => new Array(np).fill(0));
    const Jtr = new Array(np).fill(0);
    for (let i = 0; i < xs.length; i++) {
      const w = 1 / (sigmas[i] * sigmas[i]);
      const r = ys[i] - model(params, xs[i]);
      for (let a = 0; a < np; a++) {
        Jtr[a] += w * J[i][a] * r;
        for (let b = a; b < np; b++) JtJ[a][b] += w * J[i][a] * J[i][b];
      }
    }
    for (let a = 0; a < np; a++) {
      for (let b = 0; b < a; b++) JtJ[a][b] = JtJ[b][a];
    }
    let improved = false;
    for (let attempt = 0; attempt < 12; attempt++) {
      const damped = JtJ.map((row, i) =>
        row.map((v, j) => (i === j ? v * (1 + lambda) : v)));
      const step = solveLinear(damped, Jtr);
      if (step) {
        const trial = params.map((v, i) => v + step[i]);
        const trialChi2 = chiSquared(model, xs, ys, sigmas, trial);
        if (Number.isFinite(trialChi2) && trialChi2 <= chi2) {
          improved = true;
          lambda = Math.max(lambda / 4, 1e-12);
          if (chi2 - trialChi2 < tolerance * (1 + chi2)) converged = true;
          params = trial;
          chi2 = trialChi2;
          break;
        }
      }
      lambda *= 8;
    }
    if (!improved || converged) {
      converged = converged || !improved;
      break;
    }
  }

  // covariance from the undamped curvature at the optimum
  const J = jacobian(model, xs, params);
  const JtJ: number[][] = Array.from({ length: np },
    () => new Array(np).fill(0));
  for (let i = 0; i < xs.length; i++) {
    const w = 1 / (sigmas[i] * sigmas[i]);
    for (let a = 0; a < np; a++) {
      for (let b = 0; b < np; b++) JtJ[a][b] += w * J[i][a] * J[i][b];
    }
  }
  const stderr = new Array(np).fill(NaN);
  const cov = invert(JtJ);
  if (cov) {
    for (let a = 0; a < np; a++) {
      stderr[a] = cov[a][a] > 0 ? Math.sqrt(cov[a][a]) : NaN;
    }
  }
  return { params, stderr, chi2, dof: ys.length - np, converged };
}

function invert(A: number[][]): number[][] | null {
  const n = A.length;
  const M = A.map((row, i) => [
    ...row,
    ...Array.from({ length: n }, (_, j) => (i === j ? 1 : 0)),
  ]);
  for (let col = 0; col < n; col++) {
    let pivot = col;
    for (let r = col + 1; r < n; r++) {
      if (Math.abs(M[r][col]) > Math.abs(M[pivot][col])) pivot = r;
    }
    if (Math.abs(M[pivot][col]) < 1e-300) return null;
    [M[col], M[pivot]] = [M[pivot], M[col]];
    const d = M[col][col];
    for (let c = 0; c < 2 * n; c++) M[col][c] /= d;
    for (let r = 0; r < n; r++) {
      if (r === col) continue;
      const f = M[r][col];
      for (let c = 0; c < 2 * n; c++) M[r][c] -= f * M[col][c];
    }
  }
  return M.map((row) => row.slice(n));
}

/** Weighted straight-line fit returning slope/intercept with standard errors. */
export function linearFit(
  x: number[], y: number[], sigma?: number[],
): { slope: number; slopeStderr: number; intercept: number;
     interceptStderr: number } {
  const w = x.map((_, i) => (sigma ? 1 / (sigma[i] * sigma[i]) : 1));
  let sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (let i = 0; i < x.length; i++) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
    swxx += w[i] * x[i] * x[i];
    swxy += w[i] * x[i] * y[i];
  }
  const denom = sw * swxx - swx * swx;
  const slope = (sw * swxy - swx * swy) / denom;
  const intercept = (swy * swxx - swx * swxy) / denom;
  return {
    slope,
    intercept,
    slopeStderr: Math.sqrt(sw / denom),
    interceptStderr: Math.sqrt(swxx / denom),
  };
}
