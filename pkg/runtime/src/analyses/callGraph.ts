/**
 * Dynamic call graph. Edges use original function indices; indirect calls
 * are resolved through the static table map (callee null when that fails).
 */

import { AnalysisCallbacks } from "../types";

export interface CallEdge {
  caller: number;
  callee: number | null;
  indirect: boolean;
}

export interface CallGraph {
  callbacks: AnalysisCallbacks;
  edges(): CallEdge[];
}

export function createCallGraph(): CallGraph {
  const seen = new Map<string, CallEdge>();
  const callbacks: AnalysisCallbacks = {
    call_pre(loc, func, _args, tableIndex) {
      const edge: CallEdge = {
        caller: loc.func,
        callee: func,
        indirect: tableIndex !== null,
      };
      seen.set(`${edge.caller}->${edge.callee}:${edge.indirect}`, edge);
    },
  };
  return {
    callbacks,
    edges: () => [...seen.values()].sort((a, b) =>
      a.caller - b.caller || Number(a.callee) - Number(b.callee)),
  };
}
