export * from "./types.js";
export { parseCsv, parseJsonl, loadRows } from "./io.js";
export { levenbergMarquardt, linearFit } from "./leastSquares.js";
export { fitThreshold, fitThresholdAuto } from "./threshold.js";
export { fitSustainable } from "./sustainable.js";
export type { ThresholdPoint } from "./sustainable.js";
export { fitScaling } from "./scaling.js";
export { renderThresholdCrossing, renderThresholdVsN, renderScalingLogLog }
  from "./plots.js";
