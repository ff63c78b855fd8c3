export {
  ENTROPY_TIMESERIES_COLUMNS,
  GAMMA_PEAK_COLUMNS,
  GGE_COLUMNS,
  SCALING_FIT_COLUMNS,
  STEADY_STATE_COLUMNS,
  SchemaError,
  parseCsvText,
  readCsv,
} from "./csv";
export { buildGammaSweepOption } from "./gammaSweep";
export { artifactName, renderSvg } from "./render";
export { buildScalingOption } from "./scaling";
export { buildTimeseriesOption, resolveGgeLines } from "./timeseries";
export { main } from "./cli";
