/**
 * Instruction-profile signature over the binary operations characteristic
 * of mining kernels. Only the five watched i32 ops are counted; everything
 * else (including i64 variants) is ignored.
 */

import { AnalysisCallbacks } from "../types";

export const WATCHED_OPS = [
  "i32.add", "i32.and", "i32.shl", "i32.shr_u", "i32.xor",
] as const;

export interface InstructionSignature {
  callbacks: AnalysisCallbacks;
  counts(): Record<string, number>;
}

export function createInstructionSignature(): InstructionSignature {
  const signature: Record<string, number> = {};
  const watched = new Set<string>(WATCHED_OPS);

  const callbacks: AnalysisCallbacks = {
    binary(_loc, op) {
      if (watched.has(op)) {
        signature[op] = (signature[op] || 0) + 1;
      }
    },
  };

  return {
    callbacks,
    counts: () => ({ ...signature }),
  };
}
