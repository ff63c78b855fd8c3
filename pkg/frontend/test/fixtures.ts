/** Synthetic CSV fixtures conforming to the engine's output contracts. */
import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "plotkit-"));
}

export function writeFixture(dir: string, name: string, text: string): string {
  const path = join(dir, name);
  writeFileSync(path, text, "utf-8");
  return path;
}

export function timeseriesCsv(n = 20, scale = 1.0): string {
  const lines = ["t,mean_S,stderr_S,mean_nn_pairing,stderr_nn_pairing"];
  for (let i = 0; i < n; i++) {
    const t = i * 0.5;
    const s = scale * (1 - Math.exp(-t / 3));
    lines.push(`${t},${s.toFixed(6)},${(0.05 * s).toFixed(6)},0.1,0.01`);
  }
  return lines.join("\n") + "\n";
}

export function steadyStateCsv(rows: { L: number; gamma: number; s: number; err?: number; delta?: number }[]): string {
  const lines = ["L,J,delta,gamma,n_traj,s_steady,s_steady_err,window_start,window_end"];
  for (const r of rows) {
    lines.push(
      `${r.L},1,${r.delta ?? 2},${r.gamma},100,${r.s},${r.err ?? 0.05},150,300`,
    );
  }
  return lines.join("\n") + "\n";
}

export function gammaPeakCsv(delta: number, gammaPeak: number): string {
  return (
    "delta,L,gamma_peak,gamma_grid_spacing\n" +
    `${delta},32,${gammaPeak},0.04\n`
  );
}

export function scalingFitCsv(lambda: number, intercept: number, r2: number, Ls: number[]): string {
  return (
    "delta,gamma,lambda,intercept,r_squared,L_list\n" +
    `2,0.04,${lambda},${intercept},${r2},${Ls.join(";")}\n`
  );
}

export function ggeCsv(): string {
  return (
    "delta,c_delta,tau_over_L,nn_pairing\n" +
    "0,1.38629436112,0.25,0\n" +
    "1,0.864618,0.404545,0.138196601\n" +
    "2,0.527046,0.603553,0.125\n"
  );
}
