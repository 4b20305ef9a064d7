/**
 * Harness CLI.
 *
 *   run-instrumented <module.wasm> <glue.js-glue> <analysis.js>
 *       [--invoke <export> <args...>]...
 *
 * The analysis file is a CommonJS module exporting either a callbacks
 * object, an object with a `callbacks` field, or a factory function
 * returning one of those. If the loaded analysis exposes a report-style
 * method (report/map/counts/edges/covered), its value is printed after the
 * run. i64 arguments may be written with an `n` suffix.
 */

import * as fs from "fs";
import * as path from "path";
import { AnalysisCallbacks, HOOK_NAMES } from "./types";
import { instantiate, Invocation, loadGlue, memoryDigest, runCalls } from "./runtime";

interface LoadedAnalysis {
  callbacks: AnalysisCallbacks;
  report?: () => unknown;
}

function hasHooks(obj: unknown): boolean {
  return typeof obj === "object" && obj !== null &&
    HOOK_NAMES.some((n) =>
      typeof (obj as Record<string, unknown>)[n] === "function");
}

function loadAnalysis(file: string): LoadedAnalysis {
  // eslint-disable-next-line @typescript-eslint/no-var-requires
  let mod = require(path.resolve(file));
  if (typeof mod === "function") {
    mod = mod();
  }
  if (!hasHooks(mod) && !hasHooks(mod.callbacks)) {
    // a module exporting a single create* factory (the shipped analyses)
    const factories = Object.keys(mod).filter(
      (k) => k.startsWith("create") && typeof mod[k] === "function");
    if (factories.length === 1) {
      mod = mod[factories[0]]();
    }
  }
  const callbacks: AnalysisCallbacks = mod.callbacks ?? mod;
  for (const name of ["report", "map", "counts", "edges", "covered"]) {
    if (typeof mod[name] === "function") {
      return { callbacks, report: () => mod[name]() };
    }
  }
  return { callbacks };
}

function parseArgs(argv: string[]): { positional: string[]; calls: Invocation[] } {
  const positional: string[] = [];
  const calls: Invocation[] = [];
  let i = 0;
  while (i < argv.length) {
    if (argv[i] === "--invoke") {
      const name = argv[i + 1];
      const args: (number | bigint)[] = [];
      i += 2;
      while (i < argv.length && argv[i] !== "--invoke") {
        const raw = argv[i];
        args.push(raw.endsWith("n") ? BigInt(raw.slice(0, -1)) : Number(raw));
        i += 1;
      }
      calls.push([name, args]);
    } else {
      positional.push(argv[i]);
      i += 1;
    }
  }
  return { positional, calls };
}

export function main(argv: string[]): number {
  if (argv[0] !== "run-instrumented") {
    process.stderr.write(
      "usage: harness run-instrumented <wasm> <glue> <analysis> " +
      "[--invoke <export> <args...>]...\n");
    return 2;
  }
  const { positional, calls } = parseArgs(argv.slice(1));
  const [wasmPath, gluePath, analysisPath] = positional;
  if (!wasmPath || !gluePath || !analysisPath) {
    process.stderr.write("missing <wasm>, <glue> or <analysis>\n");
    return 2;
  }
  const rt = loadGlue(gluePath);
  const analysis = loadAnalysis(analysisPath);
  const instance = instantiate(rt, fs.readFileSync(wasmPath),
                               analysis.callbacks);
  const { results, memory } = runCalls(
    instance, calls, rt.metadata.memoryExportName);
  const out = {
    results: results.map((r) => (typeof r === "bigint" ? `${r}n` : r)),
    memoryHash: memoryDigest(memory),
    report: analysis.report ? analysis.report() : undefined,
  };
  process.stdout.write(JSON.stringify(out, (_k, v) =>
    typeof v === "bigint" ? `${v}n` : v) + "\n");
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
