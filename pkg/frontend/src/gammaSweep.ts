/** Steady-state entanglement versus measurement rate, one curve per Delta. */
import type { EChartsCoreOption } from "echarts";
import { existsSync } from "fs";
import {
  GAMMA_PEAK_COLUMNS,
  STEADY_STATE_COLUMNS,
  SchemaError,
  num,
  readCsv,
} from "./csv";

export interface SweepInput {
  path: string;
  /** Optional companion gamma_peak.csv; missing file is only a warning. */
  peakPath?: string;
}

interface SweepData {
  delta: number;
  points: [number, number][];
  errors: [number, number, number][]; // gamma, low, high
  peak?: { gamma: number; s: number };
}

export function loadSweep(input: SweepInput, warn: (msg: string) => void): SweepData {
  const rows = readCsv(input.path, STEADY_STATE_COLUMNS);
  const deltas = new Set(rows.map((r) => num(r, "delta")));
  if (deltas.size !== 1) {
    throw new SchemaError(`${input.path}: expected a single delta per sweep file`);
  }
  const delta = [...deltas][0];
  const points = rows.map(
    (r) => [num(r, "gamma"), num(r, "s_steady")] as [number, number],
  );
  const errors = rows.map(
    (r) =>
      [
        num(r, "gamma"),
        num(r, "s_steady") - num(r, "s_steady_err"),
        num(r, "s_steady") + num(r, "s_steady_err"),
      ] as [number, number, number],
  );
  let peak: SweepData["peak"];
  if (input.peakPath) {
    if (!existsSync(input.peakPath)) {
      warn(`peak file ${input.peakPath} not found; markers skipped`);
    } else {
      const prow = readCsv(input.peakPath, GAMMA_PEAK_COLUMNS)[0];
      const gPeak = num(prow, "gamma_peak");
      const match = points.find(([g]) => g === gPeak);
      peak = { gamma: gPeak, s: match ? match[1] : NaN };
    }
  }
  return { delta, points, errors, peak };
}

export function buildGammaSweepOption(
  inputs: SweepInput[],
  warn: (msg: string) => void = (m) => console.warn(m),
): EChartsCoreOption {
  const sweeps = inputs.map((i) => loadSweep(i, warn));
  sweeps.sort((a, b) => a.delta - b.delta);
  const series: object[] = [];
  const legend: string[] = [];
  for (const sweep of sweeps) {
    const name = `delta = ${sweep.delta}`;
    legend.push(name);
    series.push({
      name,
      type: "line",
      data: sweep.points,
      symbolSize: 7,
      markPoint: sweep.peak
        ? {
            symbol: "pin",
            symbolSize: 36,
            label: { formatter: "peak" },
            data: [{ coord: [sweep.peak.gamma, sweep.peak.s] }],
          }
        : undefined,
    });
    series.push({
      name: `${name} err`,
      type: "custom",
      renderItem: errorBarRenderer,
      data: sweep.errors,
      z: 5,
      silent: true,
      tooltip: { show: false },
    });
  }
  return {
    animation: false,
    legend: { data: legend, top: 8 },
    grid: { left: 60, right: 24, top: 48, bottom: 48 },
    xAxis: { type: "value", name: "gamma", nameLocation: "middle", nameGap: 28 },
    yAxis: { type: "value", name: "S_s", nameLocation: "middle", nameGap: 40 },
    series,
  };
}

// echarts custom-series renderer drawing an I-shaped error bar
function errorBarRenderer(params: any, api: any) {
  const x = api.value(0);
  const lo = api.coord([x, api.value(1)]);
  const hi = api.coord([x, api.value(2)]);
  const halfWidth = 4;
  const style = api.style({ stroke: api.visual("color"), fill: undefined });
  return {
    type: "group",
    children: [
      { type: "line", shape: { x1: hi[0], y1: hi[1], x2: lo[0], y2: lo[1] }, style },
      {
        type: "line",
        shape: { x1: hi[0] - halfWidth, y1: hi[1], x2: hi[0] + halfWidth, y2: hi[1] },
        style,
      },
      {
        type: "line",
        shape: { x1: lo[0] - halfWidth, y1: lo[1], x2: lo[0] + halfWidth, y2: lo[1] },
        style,
      },
    ],
  };
}
