/**
 * Strict CSV ingestion for the simulation output contracts.
 *
 * Every reader validates the header against the expected schema and
 * fails loudly naming the offending column; plotkit never recomputes
 * physics from raw state, it only draws what the engine wrote.
 */
import { readFileSync } from "fs";
import Papa from "papaparse";

export class SchemaError extends Error {}

export const ENTROPY_TIMESERIES_COLUMNS = [
  "t",
  "mean_S",
  "stderr_S",
  "mean_nn_pairing",
  "stderr_nn_pairing",
] as const;

export const STEADY_STATE_COLUMNS = [
  "L",
  "J",
  "delta",
  "gamma",
  "n_traj",
  "s_steady",
  "s_steady_err",
  "window_start",
  "window_end",
] as const;

export const GAMMA_PEAK_COLUMNS = [
  "delta",
  "L",
  "gamma_peak",
  "gamma_grid_spacing",
] as const;

export const SCALING_FIT_COLUMNS = [
  "delta",
  "gamma",
  "lambda",
  "intercept",
  "r_squared",
  "L_list",
] as const;

export const GGE_COLUMNS = ["delta", "c_delta", "tau_over_L", "nn_pairing"] as const;

/** Columns that stay strings (everything else must parse as a finite number). */
const STRING_COLUMNS = new Set(["L_list"]);

export type Row = Record<string, number | string>;

export function parseCsvText(
  text: string,
  expected: readonly string[],
  label: string,
): Row[] {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${label}: ${parsed.errors[0].message}`);
  }
  const lines = parsed.data;
  if (lines.length === 0) {
    throw new SchemaError(`${label}: file is empty`);
  }
  const header = lines[0];
  for (let i = 0; i < Math.max(header.length, expected.length); i++) {
    if (header[i] !== expected[i]) {
      throw new SchemaError(
        `${label}: column ${i + 1} is ${JSON.stringify(header[i] ?? "(missing)")}, ` +
          `expected ${JSON.stringify(expected[i] ?? "(none)")}`,
      );
    }
  }
  if (lines.length === 1) {
    throw new SchemaError(`${label}: no data rows`);
  }
  const rows: Row[] = [];
  for (const cells of lines.slice(1)) {
    if (cells.length !== expected.length) {
      throw new SchemaError(
        `${label}: row with ${cells.length} cells, expected ${expected.length}`,
      );
    }
    const row: Row = {};
    expected.forEach((name, i) => {
      if (STRING_COLUMNS.has(name)) {
        row[name] = cells[i];
        return;
      }
      const v = Number(cells[i]);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`${label}: column ${name} has non-numeric value ${cells[i]}`);
      }
      row[name] = v;
    });
    rows.push(row);
  }
  return rows;
}

export function readCsv(path: string, expected: readonly string[]): Row[] {
  return parseCsvText(readFileSync(path, "utf-8"), expected, path);
}

export function num(row: Row, key: string): number {
  return row[key] as number;
}
