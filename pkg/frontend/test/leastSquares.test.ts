import { describe, expect, it } from "vitest";

import { levenbergMarquardt, linearFit, solveLinear }
  from "../src/leastSquares.js";
import { mulberry32 } from "./helpers.js";

describe("solveLinear", () => {
  it("solves a small system", () => {
    const x = solveLinear([[2, 1], [1, 3]], [5, 10]);
    expect(x![0]).toBeCloseTo(1, 10);
    expect(x![1]).toBeCloseTo(3, 10);
  });

  it("returns null on singular systems", () => {
    expect(solveLinear([[1, 1], [2, 2]], [1, 2])).toBeNull();
  });
});

describe("linearFit", () => {
  it("recovers slope and intercept exactly on noiseless data", () => {
    const x = [0, 1, 2, 3, 4];
    const y = x.map((v) => 2.5 * v - 1.25);
    const fit = linearFit(x, y);
    expect(fit.slope).toBeCloseTo(2.5, 10);
    expect(fit.intercept).toBeCloseTo(-1.25, 10);
  });

  it("weights points by their uncertainties", () => {
    const x = [0, 1, 2, 3];
    const y = [0, 1, 2, 30];   // wild outlier with a huge error bar
    const sigma = [0.01, 0.01, 0.01, 100];
    const fit = linearFit(x, y, sigma);
    expect(fit.slope).toBeCloseTo(1.0, 2);
  });
});

describe("levenbergMarquardt", () => {
  it("fits an exponential decay with standard errors", () => {
    const rand = mulberry32(7);
    const model = (params: number[], x: number[]) =>
      params[0] * Math.exp(-params[1] * x[0]);
    const xs = Array.from({ length: 40 }, (_, i) => [i * 0.25]);
    const sigma = 0.01;
    const ys = xs.map(([t]) =>
      3.0 * Math.exp(-0.8 * t) + sigma * (rand() + rand() + rand() + rand()
        + rand() + rand() - 3) * Math.sqrt(2));
    const fit = levenbergMarquardt(model, xs, ys,
      xs.map(() => sigma), [1, 1]);
    expect(fit.converged).toBe(true);
    expect(Math.abs(fit.params[0] - 3.0)).toBeLessThan(3 * fit.stderr[0] + 0.02);
    expect(Math.abs(fit.params[1] - 0.8)).toBeLessThan(3 * fit.stderr[1] + 0.02);
    expect(fit.stderr[0]).toBeGreaterThan(0);
  });
});
