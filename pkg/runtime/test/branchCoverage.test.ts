import assert from "node:assert/strict";
import * as fs from "fs";
import * as path from "path";
import { test } from "node:test";
import { createBranchCoverage } from "../src/analyses/branchCoverage";
import { runInstrumented } from "./helpers";

const GOLDEN = JSON.parse(fs.readFileSync(
  path.join(__dirname, "..", "..", "test", "golden", "branch_coverage.json"),
  "utf8"));

test("coverage of the four-site program matches the hand-derived golden map", () => {
  const analysis = createBranchCoverage();
  const { results } = runInstrumented(
    "branch_sites", analysis.callbacks,
    [["run", [0]], ["run", [1]], ["run", [2]]]);
  assert.deepEqual(results, GOLDEN.results);
  assert.deepEqual(analysis.map(), GOLDEN.coverage);
});

test("coverage accumulates one outcome for a single one-sided run", () => {
  const analysis = createBranchCoverage();
  runInstrumented("branch_sites", analysis.callbacks, [["run", [0]]]);
  const map = analysis.map();
  assert.deepEqual(map["0:3"], [false]);     // if: only the false arm seen
  assert.deepEqual(map["0:23"], [0]);        // br_table: only index 0
});

test("repeated runs produce identical coverage maps", () => {
  const snapshots: string[] = [];
  for (let i = 0; i < 3; i++) {
    const analysis = createBranchCoverage();
    runInstrumented("branch_sites", analysis.callbacks,
                    [["run", [2]], ["run", [0]], ["run", [1]]]);
    snapshots.push(JSON.stringify(analysis.map()));
  }
  assert.equal(new Set(snapshots).size, 1);
});
