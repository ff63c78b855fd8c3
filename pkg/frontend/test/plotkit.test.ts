import { existsSync, readFileSync } from "fs";
import { join } from "path";
import { describe, expect, it } from "vitest";

import {
  ENTROPY_TIMESERIES_COLUMNS,
  SchemaError,
  parseCsvText,
} from "../src/csv";
import { buildGammaSweepOption } from "../src/gammaSweep";
import { artifactName, renderSvg } from "../src/render";
import { buildScalingOption } from "../src/scaling";
import { buildTimeseriesOption, resolveGgeLines } from "../src/timeseries";
import { main } from "../src/cli";
import {
  gammaPeakCsv,
  ggeCsv,
  scalingFitCsv,
  steadyStateCsv,
  tempDir,
  timeseriesCsv,
  writeFixture,
} from "./fixtures";

describe("csv schema validation", () => {
  it("accepts a conforming file", () => {
    const rows = parseCsvText(timeseriesCsv(), ENTROPY_TIMESERIES_COLUMNS, "x");
    expect(rows.length).toBe(20);
    expect(rows[0].t).toBe(0);
  });

  it("fails loudly on a corrupted column name", () => {
    const bad = timeseriesCsv().replace("mean_S", "mean_SS");
    expect(() => parseCsvText(bad, ENTROPY_TIMESERIES_COLUMNS, "bad.csv"))
      .toThrowError(/mean_SS/);
    expect(() => parseCsvText(bad, ENTROPY_TIMESERIES_COLUMNS, "bad.csv"))
      .toThrowError(SchemaError);
  });

  it("rejects a header-only file", () => {
    const headerOnly = timeseriesCsv().split("\n")[0] + "\n";
    expect(() => parseCsvText(headerOnly, ENTROPY_TIMESERIES_COLUMNS, "empty.csv"))
      .toThrowError(/no data rows/);
  });

  it("rejects non-numeric payload", () => {
    const bad = timeseriesCsv().replace("0.1,0.01", "zebra,0.01");
    expect(() => parseCsvText(bad, ENTROPY_TIMESERIES_COLUMNS, "nan.csv"))
      .toThrowError(/non-numeric/);
  });
});

describe("timeseries figure", () => {
  it("renders one curve per input with labels", () => {
    const dir = tempDir();
    const a = writeFixture(dir, "a.csv", timeseriesCsv(20, 1));
    const b = writeFixture(dir, "b.csv", timeseriesCsv(20, 2));
    const c = writeFixture(dir, "c.csv", timeseriesCsv(20, 3));
    const option = buildTimeseriesOption([
      { path: a, label: "gamma = 0" },
      { path: b, label: "gamma = 10" },
      { path: c, label: "gamma = 70" },
    ]);
    expect((option.legend as any).data).toEqual([
      "gamma = 0",
      "gamma = 10",
      "gamma = 70",
    ]);
    const out = renderSvg(option, join(dir, "fig.svg"));
    const svg = readFileSync(out, "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("gamma = 70");
  });

  it("draws GGE reference lines from the analytic table", () => {
    const dir = tempDir();
    const gge = writeFixture(dir, "gge.csv", ggeCsv());
    const lines = resolveGgeLines({ ggePath: gge, L: 128, delta: 0, fraction: 0.25 });
    expect(lines.sPred).toBeCloseTo(0.25 * 1.38629436112 * 128, 6);
    expect(lines.tau).toBeCloseTo(32, 6);
    expect(() => resolveGgeLines({ ggePath: gge, L: 128, fraction: 0.25 }))
      .toThrowError(/--delta/);
  });
});

describe("gamma sweep figure", () => {
  it("orders the legend by delta and marks peaks", () => {
    const dir = tempDir();
    const s2 = writeFixture(dir, "d2.csv", steadyStateCsv([
      { L: 32, gamma: 0, s: 5.1, delta: 2 },
      { L: 32, gamma: 0.1, s: 7.0, delta: 2 },
      { L: 32, gamma: 0.7, s: 1.5, delta: 2 },
    ]));
    const s1 = writeFixture(dir, "d1.csv", steadyStateCsv([
      { L: 32, gamma: 0, s: 8.0, delta: 1 },
      { L: 32, gamma: 0.1, s: 9.0, delta: 1 },
      { L: 32, gamma: 0.7, s: 2.0, delta: 1 },
    ]));
    const peak = writeFixture(dir, "peak2.csv", gammaPeakCsv(2, 0.1));
    const option = buildGammaSweepOption([
      { path: s2, peakPath: peak },
      { path: s1 },
    ]);
    expect((option.legend as any).data).toEqual(["delta = 1", "delta = 2"]);
    const series = option.series as any[];
    const withPeak = series.find((s) => s.name === "delta = 2");
    expect(withPeak.markPoint.data[0].coord).toEqual([0.1, 7.0]);
    const svg = readFileSync(renderSvg(option, join(dir, "sweep.svg")), "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("warns and skips markers when the peak file is absent", () => {
    const dir = tempDir();
    const s2 = writeFixture(dir, "d2.csv", steadyStateCsv([
      { L: 32, gamma: 0, s: 5.1 },
      { L: 32, gamma: 0.1, s: 7.0 },
    ]));
    const warnings: string[] = [];
    const option = buildGammaSweepOption(
      [{ path: s2, peakPath: join(dir, "missing.csv") }],
      (m) => warnings.push(m),
    );
    expect(warnings.length).toBe(1);
    const series = option.series as any[];
    expect(series.find((s) => s.name === "delta = 2").markPoint).toBeUndefined();
  });
});

describe("scaling figure", () => {
  it("overlays the fitted line on exact synthetic data", () => {
    const dir = tempDir();
    const Ls = [16, 32, 64];
    const lam = 0.7;
    const c = 0.3;
    const steady = writeFixture(dir, "steady.csv", steadyStateCsv(
      Ls.map((L) => ({ L, gamma: 0.04, s: lam * Math.log(L) ** 2 + c })),
    ));
    const fit = writeFixture(dir, "fit.csv", scalingFitCsv(lam, c, 1.0, Ls));
    const option = buildScalingOption({ steadyPath: steady, fitPath: fit });
    const series = option.series as any[];
    const scatter = series.find((s) => s.type === "scatter").data;
    const line = series.find((s) => s.type === "line").data;
    // fitted line endpoints coincide with the extreme data points
    expect(line[0][1]).toBeCloseTo(scatter[0][1], 9);
    expect(line[1][1]).toBeCloseTo(scatter[2][1], 9);
    const svg = readFileSync(
      renderSvg(option, join(dir, "scaling.svg")), "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("lambda = 0.700");
  });

  it("draws the unmonitored series dashed without a fit", () => {
    const dir = tempDir();
    const Ls = [16, 32, 64];
    const steady = writeFixture(dir, "steady.csv", steadyStateCsv(
      Ls.map((L) => ({ L, gamma: 0.04, s: 0.5 * Math.log(L) ** 2 })),
    ));
    const fit = writeFixture(dir, "fit.csv", scalingFitCsv(0.5, 0, 1.0, Ls));
    const ref = writeFixture(dir, "ref.csv", steadyStateCsv(
      Ls.map((L) => ({ L, gamma: 0, s: 0.14 * L })),
    ));
    const option = buildScalingOption({
      steadyPath: steady, fitPath: fit, referencePath: ref,
    });
    const series = option.series as any[];
    const refSeries = series.find((s) => s.name === "unmonitored reference");
    expect(refSeries.lineStyle.type).toBe("dashed");
    expect(series.filter((s) => s.type === "line").length).toBe(2);
  });

  it("rejects mismatched L sets between data and fit", () => {
    const dir = tempDir();
    const steady = writeFixture(dir, "steady.csv", steadyStateCsv(
      [16, 32, 64].map((L) => ({ L, gamma: 0.04, s: 1 })),
    ));
    const fit = writeFixture(dir, "fit.csv", scalingFitCsv(0.5, 0, 1, [16, 32, 128]));
    expect(() => buildScalingOption({ steadyPath: steady, fitPath: fit }))
      .toThrowError(/L sets disagree/);
  });
});

describe("cli", () => {
  it("renders a figure and reports the artifact path", () => {
    const dir = tempDir();
    const a = writeFixture(dir, "a.csv", timeseriesCsv());
    const out = join(dir, "out.svg");
    expect(main(["timeseries", "--out", out, "--labels", "run", a])).toBe(0);
    expect(existsSync(out)).toBe(true);
  });

  it("derives stable artifact names from the inputs", () => {
    const dir = tempDir();
    const a = writeFixture(dir, "a.csv", timeseriesCsv());
    expect(artifactName("timeseries", [a])).toBe(artifactName("timeseries", [a]));
    expect(artifactName("timeseries", [a])).toMatch(/^timeseries-[0-9a-f]{8}\.svg$/);
  });

  it("exits nonzero on a corrupted column and names it", () => {
    const dir = tempDir();
    const bad = writeFixture(dir, "bad.csv",
      timeseriesCsv().replace("stderr_S", "stderrS"));
    expect(main(["timeseries", "--out", join(dir, "x.svg"), bad])).toBe(1);
  });

  it("exits nonzero on unknown command", () => {
    expect(main(["frobnicate"])).toBe(1);
  });
});
