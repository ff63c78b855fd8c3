/** Headless SVG rendering and derived artifact names. */
import { createHash } from "crypto";
import { existsSync, readFileSync, writeFileSync } from "fs";
import { dirname, join } from "path";
import * as echarts from "echarts";

export interface RenderOptions {
  width?: number;
  height?: number;
}

export function renderSvg(
  option: echarts.EChartsCoreOption,
  outPath: string,
  opts: RenderOptions = {},
): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: opts.width ?? 860,
    height: opts.height ?? 540,
  });
  chart.setOption(option);
  const svg = chart.renderToSVGString();
  chart.dispose();
  writeFileSync(outPath, svg, "utf-8");
  return outPath;
}

/**
 * Default figure name: `<kind>-<hash8>.svg`, hashing the run manifest
 * sitting next to the first input when present, otherwise the input
 * files themselves, so re-renders of the same data reuse the same name.
 */
export function artifactName(kind: string, inputs: string[]): string {
  const hash = createHash("sha256");
  const manifest = inputs.length > 0 ? join(dirname(inputs[0]), "manifest.txt") : null;
  if (manifest && existsSync(manifest)) {
    hash.update(readFileSync(manifest));
  } else {
    for (const p of inputs) {
      hash.update(readFileSync(p));
    }
  }
  return `${kind}-${hash.digest("hex").slice(0, 8)}.svg`;
}
