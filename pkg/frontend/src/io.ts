import { readFileSync } from "node:fs";

import type { SweepRow } from "./types.js";

const NUMERIC = ["L", "N", "p", "q", "trials", "failures", "p_fail",
  "stderr", "seed"] as const;

/** Parse the simulator's CSV schema (header row required). */
export function parseCsv(text: string): SweepRow[] {
  const lines = text.trim().split(/\r?\n/);
  if (lines.length < 2) return [];
  const header = lines[0].split(",");
  const rows: SweepRow[] = [];
  for (const line of lines.slice(1)) {
    if (!line.trim()) continue;
    const parts = line.split(",");
    const record: Record<string, string> = {};
    header.forEach((name, i) => { record[name] = parts[i]; });
    rows.push(coerce(record));
  }
  return rows;
}

/** Parse line-delimited JSON records. */
export function parseJsonl(text: string): SweepRow[] {
  return text
    .split(/\r?\n/)
    .filter((line) => line.trim())
    .map((line) => coerce(JSON.parse(line)));
}

function coerce(record: Record<string, unknown>): SweepRow {
  const row: Partial<SweepRow> = {};
  for (const key of NUMERIC) {
    const value = Number(record[key]);
    if (!Number.isFinite(value)) {
      throw new Error(`sweep row is missing a numeric '${key}' field`);
    }
    (row as Record<string, number>)[key] = value;
  }
  return row as SweepRow;
}

export function loadRows(path: string): SweepRow[] {
  const text = readFileSync(path, "utf8");
  return path.endsWith(".jsonl") ? parseJsonl(text) : parseCsv(text);
}
