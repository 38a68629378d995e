/** One Monte Carlo grid cell as emitted by the simulator's sweep output. */
export interface SweepRow {
  L: number;
  N: number;
  p: number;
  q: number;
  trials: number;
  failures: number;
  p_fail: number;
  stderr: number;
  seed: number;
}

/** Quadratic crossing fit: P_fail = B0 + B1 x + B2 x^2, x = (p - pTh) L^(1/mu). */
export interface ThresholdFit {
  pTh: number;
  pThStderr: number;
  mu: number;
  muStderr: number;
  B: [number, number, number];
  chi2: number;
  dof: number;
  window: { pMin: number; pMax: number };
}

/** Exponential convergence p_th(N) = pSus [1 - (1 - pTh0/pSus) exp(-gamma N)]. */
export interface SustainableFit {
  pSus: number;
  pSusStderr: number;
  pTh0: number;
  gamma: number;
  gammaStderr: number;
  gammaUnconstrained: boolean;
}

export interface GradientFit {
  N: number;
  /** log g(d) = log(alpha) + beta log(d) */
  alpha: number;
  alphaStderr: number;
  beta: number;
  betaStderr: number;
  A: number;
  AStderr: number;
  gradients: { d: number; g: number; gStderr: number }[];
}

/** a(N) = aInf [1 - (1 - a0/aInf) exp(-gamma N)] for a in {alpha, beta, A}. */
export interface ConvergenceFit {
  inf: number;
  infStderr: number;
  zero: number;
  gamma: number;
}

export interface ScalingFit {
  perN: GradientFit[];
  alphaConvergence: ConvergenceFit | null;
  betaConvergence: ConvergenceFit | null;
  AConvergence: ConvergenceFit | null;
  pointsUsed: number;
  pointsDiscarded: number;
}
