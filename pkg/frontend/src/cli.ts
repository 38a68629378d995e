/**
 * Batch analysis of sweep output:
 *
 *   node dist/cli.js --rows sweep1.csv [--rows sweep2.jsonl ...] --out outdir
 *
 * Groups rows by cycle count, fits a threshold crossing per group, fits the
 * sustainable rate when four or more thresholds exist, runs the
 * below-threshold scaling pipeline, and writes fit_report.json plus one SVG
 * per figure.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { loadRows } from "./io.js";
import { fitScaling } from "./scaling.js";
import { fitSustainable, type ThresholdPoint } from "./sustainable.js";
import { fitThresholdAuto } from "./threshold.js";
import { renderScalingLogLog, renderThresholdCrossing, renderThresholdVsN }
  from "./plots.js";
import type { SweepRow, ThresholdFit } from "./types.js";

function parseArgs(argv: string[]): { rows: string[]; out: string } {
  const rows: string[] = [];
  let out = "analysis_out";
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--rows") rows.push(argv[++i]);
    else if (argv[i] === "--out") out = argv[++i];
    else throw new Error(`unknown argument ${argv[i]}`);
  }
  if (rows.length === 0) {
    throw new Error("usage: cli --rows <sweep.csv|sweep.jsonl> [--rows ...] "
      + "[--out dir]");
  }
  return { rows, out };
}

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err));
    return 1;
  }
  const rows: SweepRow[] = args.rows.flatMap((path) => loadRows(path));
  if (rows.length === 0) {
    console.error("no rows parsed; nothing to fit");
    return 1;
  }
  mkdirSync(args.out, { recursive: true });

  const byN = new Map<number, SweepRow[]>();
  for (const row of rows) {
    const bucket = byN.get(row.N) ?? [];
    bucket.push(row);
    byN.set(row.N, bucket);
  }

  const thresholds: (ThresholdFit & { N: number })[] = [];
  for (const [N, bucket] of [...byN.entries()].sort((a, b) => a[0] - b[0])) {
    try {
      const fit = fitThresholdAuto(bucket);
      thresholds.push({ N, ...fit });
      writeFileSync(join(args.out, `threshold_N${N}.svg`),
                    renderThresholdCrossing(bucket, fit));
      console.log(`N=${N}: p_th = ${(100 * fit.pTh).toFixed(3)}% `
        + `+- ${(100 * fit.pThStderr).toFixed(3)}% (mu = ${fit.mu.toFixed(2)})`);
    } catch (err) {
      console.error(`N=${N}: threshold fit skipped: ${String(err)}`);
    }
  }

  let sustainable = null;
  if (thresholds.length >= 4) {
    const points: ThresholdPoint[] = thresholds.map((t) => ({
      N: t.N, pTh: t.pTh, stderr: t.pThStderr,
    }));
    sustainable = fitSustainable(points);
    writeFileSync(join(args.out, "pth_vs_N.svg"),
                  renderThresholdVsN(points, sustainable));
    if (sustainable.gammaUnconstrained) {
      console.log(`p_sus = ${(100 * sustainable.pSus).toFixed(3)}% `
        + `(flat series: gamma unconstrained)`);
    } else {
      console.log(`p_sus = ${(100 * sustainable.pSus).toFixed(3)}% `
        + `+- ${(100 * sustainable.pSusStderr).toFixed(3)}%, `
        + `gamma = ${sustainable.gamma.toFixed(2)}`);
    }
  }

  const pThByN = new Map(thresholds.map((t) => [t.N, t.pTh]));
  const scaling = fitScaling(rows, pThByN);
  for (const fit of scaling.perN) {
    const bucket = (byN.get(fit.N) ?? []).filter(
      (r) => r.p < 0.8 * pThByN.get(fit.N)! && r.failures >= 10);
    const lines = fit.gradients.map((g) => ({
      L: g.d - 2,
      slope: g.g,
      intercept: Math.log((fit.N + 1) * fit.A),
    }));
    writeFileSync(join(args.out, `scaling_N${fit.N}.svg`),
                  renderScalingLogLog(bucket, lines, pThByN.get(fit.N)!));
    console.log(`N=${fit.N}: alpha = ${fit.alpha.toFixed(3)}, `
      + `beta = ${fit.beta.toFixed(3)}, A = ${fit.A.toFixed(4)} `
      + `(${fit.gradients.length} sizes)`);
  }

  const report = {
    thresholds,
    sustainable,
    scaling,
    rows_consumed: rows.length,
  };
  writeFileSync(join(args.out, "fit_report.json"),
                JSON.stringify(report, null, 2) + "\n");
  console.log(`report and figures written to ${args.out}/`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
