/**
 * Branch coverage: per branch site, the set of observed outcomes - booleans
 * for if/br_if/select, the runtime index for br_table.
 */

import { AnalysisCallbacks, Location } from "../types";

export type Outcome = boolean | number;

export interface BranchCoverage {
  callbacks: AnalysisCallbacks;
  /** "{func}:{instr}" -> sorted outcomes */
  map(): Record<string, Outcome[]>;
}

export function createBranchCoverage(): BranchCoverage {
  const coverage = new Map<string, Set<Outcome>>();

  function addBranch(loc: Location, branch: Outcome): void {
    const key = `${loc.func}:${loc.instr}`;
    let outcomes = coverage.get(key);
    if (!outcomes) {
      outcomes = new Set();
      coverage.set(key, outcomes);
    }
    outcomes.add(branch);
  }

  const callbacks: AnalysisCallbacks = {
    if_(loc, cond) { addBranch(loc, cond); },
    br_if(loc, _target, cond) { addBranch(loc, cond); },
    br_table(loc, _table, _dflt, idx) { addBranch(loc, idx); },
    select(loc, cond) { addBranch(loc, cond); },
  };

  return {
    callbacks,
    map() {
      const out: Record<string, Outcome[]> = {};
      for (const key of [...coverage.keys()].sort()) {
        out[key] = [...coverage.get(key)!].sort((a, b) =>
          Number(a) - Number(b));
      }
      return out;
    },
  };
}
