/** Records which original instruction locations were executed at all. */

import { AnalysisCallbacks, HOOK_NAMES, Location } from "../types";

export interface InstructionCoverage {
  callbacks: AnalysisCallbacks;
  covered(): string[];
}

export function createInstructionCoverage(): InstructionCoverage {
  const covered = new Set<string>();
  const callbacks: Record<string, (loc: Location) => void> = {};
  for (const name of HOOK_NAMES) {
    callbacks[name] = (loc: Location) => {
      if (loc.instr >= 0) {
        covered.add(`${loc.func}:${loc.instr}`);
      }
    };
  }
  return {
    callbacks: callbacks as AnalysisCallbacks,
    covered: () => [...covered].sort(),
  };
}
