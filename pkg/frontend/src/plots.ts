import type { SweepRow, SustainableFit, ThresholdFit } from "./types.js";
import type { ThresholdPoint } from "./sustainable.js";

/**
 * Deterministic SVG renderings of the standard figures.  No runtime plotting
 * dependency: every figure is assembled from explicit primitives so that the
 * same inputs always produce byte-identical files.
 */

const W = 640;
const H = 440;
const MARGIN = { left: 70, right: 160, top: 24, bottom: 48 };
const SERIES_COLORS = ["#1f77b4", "#e8b339", "#2ca02c", "#d62728", "#9467bd"];

interface Scale {
  (v: number): number;
}

function makeScale(lo: number, hi: number, out0: number, out1: number): Scale {
  const span = hi - lo || 1;
  return (v: number) => out0 + ((v - lo) / span) * (out1 - out0);
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toPrecision(4);
}

function axis(sx: Scale, sy: Scale, xLo: number, xHi: number,
              yLo: number, yHi: number, xLabel: string,
              yLabel: string): string {
  const parts: string[] = [];
  const x0 = sx(xLo), x1 = sx(xHi), y0 = sy(yLo), y1 = sy(yHi);
  parts.push(`<line x1="${x0.toFixed(1)}" y1="${y0.toFixed(1)}" x2="${x1.toFixed(1)}" y2="${y0.toFixed(1)}" stroke="black"/>`);
  parts.push(`<line x1="${x0.toFixed(1)}" y1="${y0.toFixed(1)}" x2="${x0.toFixed(1)}" y2="${y1.toFixed(1)}" stroke="black"/>`);
  for (let i = 0; i <= 4; i++) {
    const xv = xLo + (i / 4) * (xHi - xLo);
    const yv = yLo + (i / 4) * (yHi - yLo);
    parts.push(`<line x1="${sx(xv).toFixed(1)}" y1="${y0.toFixed(1)}" x2="${sx(xv).toFixed(1)}" y2="${(y0 + 5).toFixed(1)}" stroke="black"/>`);
    parts.push(`<text x="${sx(xv).toFixed(1)}" y="${(y0 + 18).toFixed(1)}" font-size="11" text-anchor="middle">${fmt(xv)}</text>`);
    parts.push(`<line x1="${x0.toFixed(1)}" y1="${sy(yv).toFixed(1)}" x2="${(x0 - 5).toFixed(1)}" y2="${sy(yv).toFixed(1)}" stroke="black"/>`);
    parts.push(`<text x="${(x0 - 8).toFixed(1)}" y="${(sy(yv) + 4).toFixed(1)}" font-size="11" text-anchor="end">${fmt(yv)}</text>`);
  }
  parts.push(`<text x="${((x0 + x1) / 2).toFixed(1)}" y="${(y0 + 36).toFixed(1)}" font-size="13" text-anchor="middle">${xLabel}</text>`);
  parts.push(`<text x="16" y="${((sy(yLo) + sy(yHi)) / 2).toFixed(1)}" font-size="13" text-anchor="middle" transform="rotate(-90 16 ${((sy(yLo) + sy(yHi)) / 2).toFixed(1)})">${yLabel}</text>`);
  return parts.join("\n");
}

function wrap(body: string): string {
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">\n<rect width="${W}" height="${H}" fill="white"/>\n${body}\n</svg>\n`;
}

/** Logical failure rate against physical rate, one series per system size,
 * error bars from the binomial standard error, fitted quadratic overlaid. */
export function renderThresholdCrossing(
  rows: SweepRow[], fit: ThresholdFit | null,
): string {
  const sizes = [...new Set(rows.map((r) => r.L))].sort((a, b) => a - b);
  const ps = rows.map((r) => r.p);
  const ys = rows.map((r) => r.p_fail + r.stderr);
  const xLo = Math.min(...ps), xHi = Math.max(...ps);
  const yHi = Math.max(...ys) * 1.05 || 1;
  const sx = makeScale(xLo, xHi, MARGIN.left, W - MARGIN.right);
  const sy = makeScale(0, yHi, H - MARGIN.bottom, MARGIN.top);
  const parts: string[] = [axis(sx, sy, xLo, xHi, 0, yHi,
    "physical error rate p", "logical failure rate")];
  sizes.forEach((L, si) => {
    const color = SERIES_COLORS[si % SERIES_COLORS.length];
    const series = rows.filter((r) => r.L === L)
      .sort((a, b) => a.p - b.p);
    for (const r of series) {
      const cx = sx(r.p), cy = sy(r.p_fail);
      const lo = sy(Math.max(0, r.p_fail - r.stderr));
      const hi = sy(r.p_fail + r.stderr);
      parts.push(`<line x1="${cx.toFixed(1)}" y1="${lo.toFixed(1)}" x2="${cx.toFixed(1)}" y2="${hi.toFixed(1)}" stroke="${color}"/>`);
      parts.push(`<circle cx="${cx.toFixed(1)}" cy="${cy.toFixed(1)}" r="3.5" fill="${color}"/>`);
    }
    if (fit) {
      const pts: string[] = [];
      for (let i = 0; i <= 60; i++) {
        const p = xLo + (i / 60) * (xHi - xLo);
        const u = (p - fit.pTh) * Math.pow(L, 1 / fit.mu);
        const y = fit.B[0] + fit.B[1] * u + fit.B[2] * u * u;
        if (y >= 0 && y <= yHi) {
          pts.push(`${sx(p).toFixed(1)},${sy(y).toFixed(1)}`);
        }
      }
      parts.push(`<polyline points="${pts.join(" ")}" fill="none" stroke="${color}" stroke-width="1" opacity="0.6"/>`);
    }
    parts.push(`<text x="${(W - MARGIN.right + 16).toFixed(1)}" y="${(MARGIN.top + 16 + 18 * si).toFixed(1)}" font-size="12" fill="${color}">L = ${L}</text>`);
  });
  if (fit) {
    parts.push(`<line x1="${sx(fit.pTh).toFixed(1)}" y1="${sy(0).toFixed(1)}" x2="${sx(fit.pTh).toFixed(1)}" y2="${MARGIN.top}" stroke="#888" stroke-dasharray="4 3"/>`);
    parts.push(`<text x="${(W - MARGIN.right + 16).toFixed(1)}" y="${H - MARGIN.bottom - 8}" font-size="12">p_th = ${(100 * fit.pTh).toFixed(3)}%</text>`);
  }
  return wrap(parts.join("\n"));
}

/** Fitted thresholds against cycle count with the convergence curve. */
export function renderThresholdVsN(
  points: ThresholdPoint[], fit: SustainableFit | null,
): string {
  const sorted = [...points].sort((a, b) => a.N - b.N);
  const xLo = 0;
  const xHi = Math.max(...sorted.map((pt) => pt.N)) + 1;
  const vals = sorted.flatMap((pt) => [pt.pTh - pt.stderr, pt.pTh + pt.stderr]);
  const yLo = Math.min(...vals) * 0.95;
  const yHi = Math.max(...vals) * 1.05;
  const sx = makeScale(xLo, xHi, MARGIN.left, W - MARGIN.right);
  const sy = makeScale(yLo, yHi, H - MARGIN.bottom, MARGIN.top);
  const parts: string[] = [axis(sx, sy, xLo, xHi, yLo, yHi,
    "error-correction cycles N", "threshold p_th(N)")];
  for (const pt of sorted) {
    const cx = sx(pt.N);
    parts.push(`<line x1="${cx.toFixed(1)}" y1="${sy(pt.pTh - pt.stderr).toFixed(1)}" x2="${cx.toFixed(1)}" y2="${sy(pt.pTh + pt.stderr).toFixed(1)}" stroke="#1f77b4"/>`);
    parts.push(`<circle cx="${cx.toFixed(1)}" cy="${sy(pt.pTh).toFixed(1)}" r="4" fill="#1f77b4"/>`);
  }
  if (fit && !fit.gammaUnconstrained) {
    const pts: string[] = [];
    for (let i = 0; i <= 80; i++) {
      const n = xLo + (i / 80) * (xHi - xLo);
      const y = fit.pSus * (1 - (1 - fit.pTh0 / fit.pSus)
        * Math.exp(-fit.gamma * n));
      pts.push(`${sx(n).toFixed(1)},${sy(y).toFixed(1)}`);
    }
    parts.push(`<polyline points="${pts.join(" ")}" fill="none" stroke="#1f77b4" stroke-width="1.2"/>`);
    parts.push(`<line x1="${sx(xLo).toFixed(1)}" y1="${sy(fit.pSus).toFixed(1)}" x2="${sx(xHi).toFixed(1)}" y2="${sy(fit.pSus).toFixed(1)}" stroke="#d62728" stroke-dasharray="5 4"/>`);
    parts.push(`<text x="${(W - MARGIN.right + 16).toFixed(1)}" y="${MARGIN.top + 16}" font-size="12" fill="#d62728">p_sus = ${(100 * fit.pSus).toFixed(3)}%</text>`);
  }
  return wrap(parts.join("\n"));
}

/** Log-log failure-rate scaling for one cycle count, fitted lines overlaid. */
export function renderScalingLogLog(
  rows: SweepRow[],
  lines: { L: number; slope: number; intercept: number }[] | null,
  pTh: number,
): string {
  const usable = rows.filter((r) => r.p_fail > 0);
  const sizes = [...new Set(usable.map((r) => r.L))].sort((a, b) => a - b);
  const lx = usable.map((r) => Math.log10(r.p));
  const ly = usable.map((r) => Math.log10(r.p_fail));
  const xLo = Math.min(...lx), xHi = Math.max(...lx);
  const yLo = Math.min(...ly) - 0.2, yHi = Math.max(...ly) + 0.2;
  const sx = makeScale(xLo, xHi, MARGIN.left, W - MARGIN.right);
  const sy = makeScale(yLo, yHi, H - MARGIN.bottom, MARGIN.top);
  const parts: string[] = [axis(sx, sy, xLo, xHi, yLo, yHi,
    "log10 p", "log10 P_fail")];
  sizes.forEach((L, si) => {
    const color = SERIES_COLORS[si % SERIES_COLORS.length];
    for (const r of usable.filter((row) => row.L === L)) {
      const cx = sx(Math.log10(r.p));
      const cy = sy(Math.log10(r.p_fail));
      // error bar on log P: Delta log10 P = stderr / (P ln 10)
      const half = r.stderr / (r.p_fail * Math.LN10);
      parts.push(`<line x1="${cx.toFixed(1)}" y1="${sy(Math.log10(r.p_fail) - half).toFixed(1)}" x2="${cx.toFixed(1)}" y2="${sy(Math.log10(r.p_fail) + half).toFixed(1)}" stroke="${color}"/>`);
      parts.push(`<circle cx="${cx.toFixed(1)}" cy="${cy.toFixed(1)}" r="3.5" fill="${color}"/>`);
    }
    const line = lines?.find((l) => l.L === L);
    if (line) {
      // y = intercept + slope * ln(p / pTh), rendered in log10 space
      const yat = (p: number) =>
        (line.intercept + line.slope * Math.log(p / pTh)) / Math.LN10;
      const p0 = Math.pow(10, xLo), p1 = Math.pow(10, xHi);
      parts.push(`<line x1="${sx(Math.log10(p0)).toFixed(1)}" y1="${sy(yat(p0)).toFixed(1)}" x2="${sx(Math.log10(p1)).toFixed(1)}" y2="${sy(yat(p1)).toFixed(1)}" stroke="${color}" opacity="0.6"/>`);
    }
    parts.push(`<text x="${(W - MARGIN.right + 16).toFixed(1)}" y="${(MARGIN.top + 16 + 18 * si).toFixed(1)}" font-size="12" fill="${color}">L = ${L}</text>`);
  });
  return wrap(parts.join("\n"));
}
