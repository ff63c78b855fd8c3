/** Steady-state entanglement against ln^2 L with the engine's fitted line. */
import type { EChartsCoreOption } from "echarts";
import {
  SCALING_FIT_COLUMNS,
  STEADY_STATE_COLUMNS,
  SchemaError,
  num,
  readCsv,
} from "./csv";

export interface ScalingInputs {
  steadyPath: string;
  fitPath: string;
  /** Optional gamma = 0 series, drawn dashed without a fit. */
  referencePath?: string;
}

function ln2(L: number): number {
  return Math.log(L) ** 2;
}

export function buildScalingOption(inputs: ScalingInputs): EChartsCoreOption {
  const steady = readCsv(inputs.steadyPath, STEADY_STATE_COLUMNS);
  const fit = readCsv(inputs.fitPath, SCALING_FIT_COLUMNS)[0];
  const fitLs = String(fit.L_list)
    .split(";")
    .map((s) => Number(s))
    .sort((a, b) => a - b);
  const dataLs = steady.map((r) => num(r, "L")).sort((a, b) => a - b);
  if (JSON.stringify(fitLs) !== JSON.stringify(dataLs)) {
    throw new SchemaError(
      `L sets disagree: fit has [${fitLs}], steady-state data has [${dataLs}]`,
    );
  }
  const lam = num(fit, "lambda");
  const intercept = num(fit, "intercept");
  const r2 = num(fit, "r_squared");

  const points = steady.map((r) => [ln2(num(r, "L")), num(r, "s_steady")]);
  const xs = points.map((p) => p[0]);
  const fitLine = [Math.min(...xs), Math.max(...xs)].map((x) => [
    x,
    lam * x + intercept,
  ]);

  const series: object[] = [
    { name: "monitored", type: "scatter", symbolSize: 10, data: points },
    {
      name: `fit: lambda = ${lam.toPrecision(3)}, r^2 = ${r2.toPrecision(4)}`,
      type: "line",
      data: fitLine,
      showSymbol: false,
    },
  ];
  if (inputs.referencePath) {
    const ref = readCsv(inputs.referencePath, STEADY_STATE_COLUMNS);
    series.push({
      name: "unmonitored reference",
      type: "line",
      lineStyle: { type: "dashed", color: "#333" },
      itemStyle: { color: "#333" },
      data: ref
        .map((r) => [ln2(num(r, "L")), num(r, "s_steady")])
        .sort((a, b) => a[0] - b[0]),
    });
  }
  return {
    animation: false,
    legend: { top: 8 },
    grid: { left: 60, right: 24, top: 48, bottom: 48 },
    xAxis: { type: "value", name: "ln^2 L", nameLocation: "middle", nameGap: 28 },
    yAxis: { type: "value", name: "S_s", nameLocation: "middle", nameGap: 40 },
    series,
  };
}
