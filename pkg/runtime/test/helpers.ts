import * as fs from "fs";
import * as path from "path";
import {
  AnalysisCallbacks, GlueRuntime, instantiate, instantiatePlain, Invocation,
  loadGlue, memoryDigest, runCalls, RunResult,
} from "../src/runtime";

// compiled tests run from dist/test/, fixtures live in the source tree
export const RUNTIME_DIR = path.join(__dirname, "..", "..");
export const FIXTURES = path.join(RUNTIME_DIR, "fixtures");

export const MANIFEST: Record<string, [string, number[]][]> = JSON.parse(
  fs.readFileSync(path.join(FIXTURES, "manifest.json"), "utf8"));

export function srcBytes(name: string): Uint8Array<ArrayBuffer> {
  return new Uint8Array(
    fs.readFileSync(path.join(FIXTURES, "src", `${name}.wasm`)));
}

export function gluePath(variant: string, name?: string): string {
  return path.join(FIXTURES, "out", variant, `${name ?? variant}.wasabi.js-glue`);
}

export function instrumentedBytes(variant: string,
                                  name?: string): Uint8Array<ArrayBuffer> {
  return new Uint8Array(fs.readFileSync(path.join(
    FIXTURES, "out", variant, `${name ?? variant}.instrumented.wasm`)));
}

export function report(variant: string): { hookCount: number } {
  return JSON.parse(fs.readFileSync(
    path.join(FIXTURES, "out", variant, "report.json"), "utf8"));
}

export interface InstrumentedRun extends RunResult {
  rt: GlueRuntime;
}

/** Instantiate an instrumented fixture with an analysis and run calls. */
export function runInstrumented(variant: string, analysis: AnalysisCallbacks,
                                calls: Invocation[],
                                name?: string): InstrumentedRun {
  const rt = loadGlue(gluePath(variant, name));
  const instance = instantiate(rt, instrumentedBytes(variant, name), analysis);
  const run = runCalls(instance, calls, rt.metadata.memoryExportName);
  return { ...run, rt };
}

/** Run the uninstrumented source module. */
export function runPlain(name: string, calls: Invocation[]): RunResult {
  const instance = instantiatePlain(srcBytes(name));
  return runCalls(instance, calls);
}

export function digest(run: RunResult): string | null {
  return memoryDigest(run.memory);
}
