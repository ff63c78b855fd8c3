#!/usr/bin/env node
/**
 * plotkit - render figures from monbcs CSV outputs.
 *
 *   plotkit timeseries  [--out FIG.svg] [--labels a,b,...]
 *                       [--gge GGE.csv --L N [--delta D] [--gge-fraction F]]
 *                       entropy_timeseries.csv [...]
 *   plotkit gamma-sweep [--out FIG.svg] [--peaks peak1.csv,peak2.csv,...]
 *                       gamma_sweep.csv [...]
 *   plotkit scaling     --steady steady_state.csv --fit scaling_fit.csv
 *                       [--reference gamma0_steady.csv] [--out FIG.svg]
 *
 * Exit codes: 0 success, 1 schema or usage error (message names the
 * offending column or file).
 */
import { SchemaError } from "./csv";
import { buildGammaSweepOption } from "./gammaSweep";
import { artifactName, renderSvg } from "./render";
import { buildScalingOption } from "./scaling";
import { GgeReference, buildTimeseriesOption } from "./timeseries";

interface Parsed {
  flags: Map<string, string>;
  positional: string[];
}

function parseArgs(argv: string[]): Parsed {
  const flags = new Map<string, string>();
  const positional: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a.startsWith("--")) {
      const value = argv[i + 1];
      if (value === undefined) {
        throw new SchemaError(`flag ${a} needs a value`);
      }
      flags.set(a.slice(2), value);
      i++;
    } else {
      positional.push(a);
    }
  }
  return { flags, positional };
}

function cmdTimeseries(p: Parsed): string {
  if (p.positional.length === 0) {
    throw new SchemaError("timeseries: no input CSV given");
  }
  const labels = p.flags.get("labels")?.split(",") ?? p.positional;
  if (labels.length !== p.positional.length) {
    throw new SchemaError(
      `timeseries: ${labels.length} labels for ${p.positional.length} files`,
    );
  }
  let gge: GgeReference | undefined;
  if (p.flags.has("gge")) {
    if (!p.flags.has("L")) {
      throw new SchemaError("timeseries: --gge needs --L");
    }
    gge = {
      ggePath: p.flags.get("gge")!,
      L: Number(p.flags.get("L")),
      delta: p.flags.has("delta") ? Number(p.flags.get("delta")) : undefined,
      fraction: Number(p.flags.get("gge-fraction") ?? "0.2810602314"),
    };
  }
  const inputs = p.positional.map((path, i) => ({ path, label: labels[i] }));
  const out = p.flags.get("out") ?? artifactName("timeseries", p.positional);
  return renderSvg(buildTimeseriesOption(inputs, gge), out);
}

function cmdGammaSweep(p: Parsed): string {
  if (p.positional.length === 0) {
    throw new SchemaError("gamma-sweep: no input CSV given");
  }
  const peaks = p.flags.get("peaks")?.split(",") ?? [];
  const inputs = p.positional.map((path, i) => ({ path, peakPath: peaks[i] }));
  const out = p.flags.get("out") ?? artifactName("gamma-sweep", p.positional);
  return renderSvg(buildGammaSweepOption(inputs), out);
}

function cmdScaling(p: Parsed): string {
  const steadyPath = p.flags.get("steady");
  const fitPath = p.flags.get("fit");
  if (!steadyPath || !fitPath) {
    throw new SchemaError("scaling: --steady and --fit are required");
  }
  const out = p.flags.get("out") ?? artifactName("scaling", [steadyPath, fitPath]);
  return renderSvg(
    buildScalingOption({
      steadyPath,
      fitPath,
      referencePath: p.flags.get("reference"),
    }),
    out,
  );
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    const parsed = parseArgs(rest);
    let out: string;
    switch (command) {
      case "timeseries":
        out = cmdTimeseries(parsed);
        break;
      case "gamma-sweep":
        out = cmdGammaSweep(parsed);
        break;
      case "scaling":
        out = cmdScaling(parsed);
        break;
      default:
        console.error(`unknown command ${command ?? "(none)"}; ` +
          "expected timeseries | gamma-sweep | scaling");
        return 1;
    }
    console.log(out);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(String(err));
    }
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
