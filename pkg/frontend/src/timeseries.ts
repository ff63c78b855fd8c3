/** Entanglement time-series figure: S(t) curves with stderr bands. */
import type { EChartsCoreOption } from "echarts";
import {
  ENTROPY_TIMESERIES_COLUMNS,
  GGE_COLUMNS,
  Row,
  SchemaError,
  num,
  readCsv,
} from "./csv";

export interface TimeseriesInput {
  path: string;
  label: string;
}

export interface GgeReference {
  ggePath: string;
  L: number;
  /** Row selector when the gge table holds several pairing strengths. */
  delta?: number;
  /** Calibrated half-chain plateau fraction of c_Delta * L. */
  fraction: number;
}

export function resolveGgeLines(ref: GgeReference): { sPred: number; tau: number } {
  const rows = readCsv(ref.ggePath, GGE_COLUMNS);
  let row: Row | undefined;
  if (ref.delta === undefined) {
    if (rows.length !== 1) {
      throw new SchemaError(
        `${ref.ggePath}: ${rows.length} rows; pass --delta to pick one`,
      );
    }
    row = rows[0];
  } else {
    row = rows.find((r) => num(r, "delta") === ref.delta);
    if (!row) {
      throw new SchemaError(`${ref.ggePath}: no row with delta = ${ref.delta}`);
    }
  }
  return {
    sPred: ref.fraction * num(row, "c_delta") * ref.L,
    tau: num(row, "tau_over_L") * ref.L,
  };
}

export function buildTimeseriesOption(
  inputs: TimeseriesInput[],
  gge?: GgeReference,
): EChartsCoreOption {
  const series: object[] = [];
  const legend: string[] = [];
  inputs.forEach((input, i) => {
    const rows = readCsv(input.path, ENTROPY_TIMESERIES_COLUMNS);
    const mean = rows.map((r) => [num(r, "t"), num(r, "mean_S")]);
    const lower = rows.map((r) => [num(r, "t"), num(r, "mean_S") - num(r, "stderr_S")]);
    const band = rows.map((r) => [num(r, "t"), 2 * num(r, "stderr_S")]);
    legend.push(input.label);
    series.push(
      {
        name: `${input.label} band lower`,
        type: "line",
        data: lower,
        stack: `band-${i}`,
        lineStyle: { opacity: 0 },
        symbol: "none",
        silent: true,
        tooltip: { show: false },
      },
      {
        name: `${input.label} band`,
        type: "line",
        data: band,
        stack: `band-${i}`,
        lineStyle: { opacity: 0 },
        areaStyle: { opacity: 0.18 },
        symbol: "none",
        silent: true,
        tooltip: { show: false },
      },
      {
        name: input.label,
        type: "line",
        data: mean,
        showSymbol: false,
        emphasis: { focus: "series" },
      },
    );
  });
  const markLine = gge
    ? {
        silent: true,
        symbol: "none",
        lineStyle: { type: "dashed", color: "#555" },
        data: [
          { yAxis: resolveGgeLines(gge).sPred, name: "steady-state prediction" },
          { xAxis: resolveGgeLines(gge).tau, name: "saturation time" },
        ],
      }
    : undefined;
  if (markLine) {
    series.push({ name: "reference", type: "line", data: [], markLine });
  }
  return {
    animation: false,
    legend: { data: legend, top: 8 },
    grid: { left: 60, right: 24, top: 48, bottom: 48 },
    xAxis: { type: "value", name: "t", nameLocation: "middle", nameGap: 28 },
    yAxis: { type: "value", name: "S", nameLocation: "middle", nameGap: 40 },
    series,
  };
}
