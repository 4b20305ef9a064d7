/** Shared types for the analysis API and the glue contract (docs/glue.md). */

export interface Location {
  func: number;
  instr: number;
}

export interface Target {
  label: number;
  location: Location;
}

export interface Memarg {
  addr: number;
  offset: number;
}

export type BlockType = "function" | "block" | "loop" | "if" | "else";

/** i32/f32/f64 arrive as number, i64 as bigint. */
export type WasmValue = number | bigint;

/**
 * The 23 high-level hooks. All are optional; missing hooks cost one
 * presence check. The first argument is always the instruction's location
 * in the original (uninstrumented) module.
 */
export interface AnalysisCallbacks {
  start?(loc: Location): void;
  nop?(loc: Location): void;
  unreachable?(loc: Location): void;
  if_?(loc: Location, condition: boolean): void;
  br?(loc: Location, target: Target): void;
  br_if?(loc: Location, target: Target, condition: boolean): void;
  br_table?(loc: Location, table: Target[], defaultTarget: Target,
            tableIndex: number): void;
  begin?(loc: Location, type: BlockType): void;
  end?(loc: Location, type: BlockType, beginLoc: Location): void;
  memory_size?(loc: Location, currentPages: number): void;
  memory_grow?(loc: Location, delta: number, previousPages: number): void;
  const_?(loc: Location, value: WasmValue): void;
  drop?(loc: Location, value: WasmValue): void;
  select?(loc: Location, condition: boolean, first: WasmValue,
          second: WasmValue): void;
  unary?(loc: Location, op: string, input: WasmValue, result: WasmValue): void;
  binary?(loc: Location, op: string, first: WasmValue, second: WasmValue,
          result: WasmValue): void;
  load?(loc: Location, op: string, memarg: Memarg, value: WasmValue): void;
  store?(loc: Location, op: string, memarg: Memarg, value: WasmValue): void;
  local?(loc: Location, op: string, index: number, value: WasmValue): void;
  global?(loc: Location, op: string, index: number, value: WasmValue): void;
  call_pre?(loc: Location, func: number | null, args: WasmValue[],
            tableIndex: number | null): void;
  call_post?(loc: Location, results: WasmValue[]): void;
  return_?(loc: Location, results: WasmValue[]): void;
}

export const HOOK_NAMES: (keyof AnalysisCallbacks)[] = [
  "start", "nop", "unreachable", "if_", "br", "br_if", "br_table", "begin",
  "end", "memory_size", "memory_grow", "const_", "drop", "select", "unary",
  "binary", "load", "store", "local", "global", "call_pre", "call_post",
  "return_",
];

export interface FunctionTypeInfo {
  params: string[];
  results: string[];
}

/** [blockType, beginInstr, endInstr], innermost first. */
export type EndedBlock = [BlockType, number, number];

export interface BrTableTarget {
  label: number;
  instr: number;
  ended: EndedBlock[];
}

export interface BrTableInfo {
  func: number;
  instr: number;
  targets: BrTableTarget[];
  default: BrTableTarget;
}

export interface ModuleMetadata {
  functionTypes: FunctionTypeInfo[];
  hookImportCount: number;
  indexMap: number[];
  brTables: BrTableInfo[];
  exports: Record<string, { kind: string; index: number }>;
  tableExportName: string | null;
  memoryExportName: string | null;
  table: Record<string, number>;
}

/** The object a glue script exports (and sets as globalThis.__wasabi_runtime). */
export interface GlueRuntime {
  metadata: ModuleMetadata;
  analysis: AnalysisCallbacks;
  hooks: Record<string, (...args: number[]) => void>;
  instance: WebAssembly.Instance | null;
  table: WebAssembly.Table | null;
  memory: WebAssembly.Memory | null;
  setAnalysis(callbacks: AnalysisCallbacks): GlueRuntime;
  bindInstance(instance: WebAssembly.Instance): GlueRuntime;
  importObject(extra?: WebAssembly.Imports): WebAssembly.Imports;
  resolveTable(index: number | null): number | null;
}
