/**
 * Host-side runtime: load a generated glue script, instantiate instrumented
 * modules against it, and dispatch low-level hook calls.
 */

import * as fs from "fs";
import { AnalysisCallbacks, GlueRuntime } from "./types";

export { joinI64, splitI64 } from "./i64";
export * from "./types";

/**
 * Load a glue script from disk. Works regardless of file extension
 * (`.wasabi.js-glue`): the text is evaluated in a CommonJS-style shim.
 * Throws on syntax errors, so this doubles as the parse check.
 */
export function loadGlue(gluePath: string): GlueRuntime {
  const text = fs.readFileSync(gluePath, "utf8");
  const module = { exports: {} as GlueRuntime };
  const factory = new Function("module", "exports", text);
  factory(module, module.exports);
  const rt = module.exports;
  if (typeof rt.setAnalysis !== "function" || typeof rt.hooks !== "object") {
    throw new Error(`${gluePath} does not export a glue runtime`);
  }
  return rt;
}

/**
 * Route one low-level hook invocation by symbol name. The glue's generated
 * functions are the dispatch table; an unknown name means the glue and the
 * runtime disagree about the hook set.
 */
export function dispatch(rt: GlueRuntime, name: string,
                         rawArgs: number[]): void {
  const fn = rt.hooks[name];
  if (typeof fn !== "function") {
    throw new Error(
      `unknown low-level hook "${name}" (glue/runtime version mismatch)`);
  }
  fn(...rawArgs);
}

/**
 * Instantiate an instrumented module with its glue. The analysis must be
 * installed before instantiation because a start function fires hooks
 * during it.
 */
export function instantiate(rt: GlueRuntime, wasmBytes: Uint8Array<ArrayBuffer>,
                            analysis?: AnalysisCallbacks,
                            extraImports?: WebAssembly.Imports,
                            ): WebAssembly.Instance {
  if (analysis !== undefined) {
    rt.setAnalysis(analysis);
  }
  const module = new WebAssembly.Module(wasmBytes);
  const instance = new WebAssembly.Instance(module, rt.importObject(extraImports));
  rt.bindInstance(instance);
  return instance;
}

/** Instantiate an *uninstrumented* module, stubbing any function import. */
export function instantiatePlain(wasmBytes: Uint8Array<ArrayBuffer>): WebAssembly.Instance {
  const module = new WebAssembly.Module(wasmBytes);
  const imports: WebAssembly.Imports = {};
  for (const im of WebAssembly.Module.imports(module)) {
    imports[im.module] = imports[im.module] || {};
    if (im.kind === "function") {
      (imports[im.module] as Record<string, unknown>)[im.name] = () => {};
    }
  }
  return new WebAssembly.Instance(module, imports);
}

export interface RunResult {
  results: (number | bigint | null)[];
  memory: WebAssembly.Memory | null;
}

export type Invocation = [exportName: string, args: (number | bigint)[]];

/** Run a list of export invocations on an instance. */
export function runCalls(instance: WebAssembly.Instance,
                         calls: Invocation[],
                         memoryExport?: string | null): RunResult {
  const results: (number | bigint | null)[] = [];
  for (const [name, args] of calls) {
    const fn = instance.exports[name] as (...a: (number | bigint)[]) => unknown;
    if (typeof fn !== "function") {
      throw new Error(`no exported function "${name}"`);
    }
    const value = fn(...args);
    results.push(value === undefined ? null : (value as number | bigint));
  }
  let memory: WebAssembly.Memory | null = null;
  if (memoryExport) {
    memory = (instance.exports[memoryExport] as WebAssembly.Memory) ?? null;
  } else {
    for (const value of Object.values(instance.exports)) {
      if (value instanceof WebAssembly.Memory) {
        memory = value;
        break;
      }
    }
  }
  return { results, memory };
}

export function memoryDigest(memory: WebAssembly.Memory | null): string | null {
  if (memory === null) {
    return null;
  }
  const crypto = require("crypto") as typeof import("crypto");
  return crypto.createHash("sha256")
    .update(Buffer.from(memory.buffer)).digest("hex");
}
