/** Counts how often each function, block and loop is entered. */

import { AnalysisCallbacks } from "../types";

export interface BasicBlockProfile {
  callbacks: AnalysisCallbacks;
  counts(): Record<string, number>;
}

export function createBasicBlockProfile(): BasicBlockProfile {
  const counts: Record<string, number> = {};
  const callbacks: AnalysisCallbacks = {
    begin(loc, type) {
      const key = `${loc.func}:${loc.instr}:${type}`;
      counts[key] = (counts[key] || 0) + 1;
    },
  };
  return { callbacks, counts: () => ({ ...counts }) };
}
