import { existsSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { loadRows } from "../src/io.js";
import { fitSustainable } from "../src/sustainable.js";
import { fitThreshold } from "../src/threshold.js";
import { fitScaling } from "../src/scaling.js";
import { renderScalingLogLog, renderThresholdCrossing, renderThresholdVsN }
  from "../src/plots.js";

const RESULTS = join(__dirname, "..", "..", "results", "acceptance");
const N0 = join(RESULTS, "threshold_N0.jsonl");

describe("figures from real simulator output", () => {
  it.skipIf(!existsSync(N0))(
    "threshold crossing renders with binomial error bars", () => {
      const rows = loadRows(N0);
      expect(rows.length).toBeGreaterThanOrEqual(12);
      for (const r of rows) {
        // bars use the simulator's stderr column, which is Delta p
        expect(r.stderr).toBeCloseTo(
          Math.sqrt(((1 - r.p_fail) * r.p_fail) / r.trials), 10);
      }
      const fit = fitThreshold(rows, { pMin: 0.002, pMax: 0.006 });
      expect(fit.pTh).toBeGreaterThan(0.002);
      expect(fit.pTh).toBeLessThan(0.006);
      const svg = renderThresholdCrossing(rows, fit);
      expect(svg).toContain("p_th");
      // one error bar + one marker per row
      expect((svg.match(/<circle/g) ?? []).length).toBe(rows.length);
      expect(svg).toBe(renderThresholdCrossing(rows, fit));
    });

  const allN = [0, 1, 2, 3].map((n) => join(RESULTS, `threshold_N${n}.jsonl`));
  it.skipIf(!allN.every(existsSync))(
    "threshold-vs-N and scaling figures render from the cycle sweeps", () => {
      const points = allN.map((path, N) => {
        const fit = fitThreshold(loadRows(path));
        return { N, pTh: fit.pTh, stderr: fit.pThStderr };
      });
      const sus = fitSustainable(points);
      const svg = renderThresholdVsN(points, sus);
      expect((svg.match(/<circle/g) ?? []).length).toBe(4);

      const rows = allN.flatMap((path) => loadRows(path));
      const pThByN = new Map(points.map((pt) => [pt.N, pt.pTh]));
      const scaling = fitScaling(rows, pThByN);
      expect(scaling.pointsUsed).toBeGreaterThan(0);
      const byN = rows.filter((r) => r.N === 2
        && r.p < 0.8 * pThByN.get(2)! && r.failures >= 10);
      if (byN.length > 0) {
        const logSvg = renderScalingLogLog(byN, null, pThByN.get(2)!);
        expect(logSvg).toContain("log10 P_fail");
      }
    });
});
