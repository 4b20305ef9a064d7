/**
 * Memory access tracing: every load and store appended as one
 * line-delimited JSON record (func, instr, op, addr, offset, value) for
 * offline analysis.
 */

import * as fs from "fs";
import { AnalysisCallbacks, Memarg, WasmValue } from "../types";

export interface MemoryRecord {
  func: number;
  instr: number;
  op: string;
  addr: number;
  offset: number;
  value: number | string;   // bigint serialized as decimal string
}

export interface MemoryTrace {
  callbacks: AnalysisCallbacks;
  records: MemoryRecord[];
  writeTo(path: string): void;
}

export function createMemoryTrace(): MemoryTrace {
  const records: MemoryRecord[] = [];

  function record(loc: { func: number; instr: number }, op: string,
                  memarg: Memarg, value: WasmValue): void {
    records.push({
      func: loc.func,
      instr: loc.instr,
      op,
      addr: memarg.addr,
      offset: memarg.offset,
      value: typeof value === "bigint" ? value.toString() : value,
    });
  }

  const callbacks: AnalysisCallbacks = {
    load(loc, op, memarg, value) { record(loc, op, memarg, value); },
    store(loc, op, memarg, value) { record(loc, op, memarg, value); },
  };

  return {
    callbacks,
    records,
    writeTo(path: string) {
      fs.writeFileSync(
        path, records.map((r) => JSON.stringify(r)).join("\n") + "\n");
    },
  };
}
