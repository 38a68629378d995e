import type { SweepRow } from "../src/types.js";

/** Deterministic 32-bit PRNG so synthetic datasets are reproducible. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Binomial sample: exact for small expected counts, normal beyond. */
export function binomial(trials: number, prob: number,
                         rand: () => number): number {
  const mean = trials * prob;
  if (mean <= 50 || trials - mean <= 50) {
    let failures = 0;
    for (let i = 0; i < trials; i++) {
      if (rand() < prob) failures += 1;
    }
    return failures;
  }
  const u1 = Math.max(rand(), 1e-12);
  const u2 = rand();
  const z = Math.sqrt(-2 * Math.log(u1)) * Math.cos(2 * Math.PI * u2);
  const sample = Math.round(mean + z * Math.sqrt(mean * (1 - prob)));
  return Math.min(trials, Math.max(0, sample));
}

export function makeRow(L: number, N: number, p: number, trials: number,
                        failures: number): SweepRow {
  const pFail = failures / trials;
  return {
    L, N, p, q: p, trials, failures,
    p_fail: pFail,
    stderr: Math.sqrt(((1 - pFail) * pFail) / trials),
    seed: 1,
  };
}

/** Rows drawn from the quadratic crossing form with binomial noise. */
export function syntheticCrossing(
  pTh: number, mu: number, B: [number, number, number],
  sizes: number[], ps: number[], trials: number, seed: number,
): SweepRow[] {
  const rand = mulberry32(seed);
  const rows: SweepRow[] = [];
  for (const L of sizes) {
    for (const p of ps) {
      const x = (p - pTh) * Math.pow(L, 1 / mu);
      const mean = Math.min(0.95, Math.max(0.0005,
        B[0] + B[1] * x + B[2] * x * x));
      rows.push(makeRow(L, 0, p, trials, binomial(trials, mean, rand)));
    }
  }
  return rows;
}
