import assert from "node:assert/strict";
import { test } from "node:test";
import { joinI64, splitI64 } from "../src/i64";
import { WasmValue } from "../src/types";
import { runInstrumented } from "./helpers";

const BOUNDARY: bigint[] = [
  0n, 1n, -1n, 2n, -2n,
  2n ** 31n - 1n, 2n ** 31n, -(2n ** 31n),
  2n ** 32n - 1n, 2n ** 32n, 2n ** 32n + 1n, -(2n ** 32n),
  2n ** 63n - 1n, -(2n ** 63n), 2n ** 62n, -(2n ** 62n) - 5n,
];

// deterministic xorshift64* stream
function* randomI64(count: number): Generator<bigint> {
  let state = 0x9e3779b97f4a7c15n;
  for (let i = 0; i < count; i++) {
    state ^= state >> 12n;
    state ^= BigInt.asUintN(64, state << 25n);
    state ^= state >> 27n;
    yield BigInt.asIntN(64, BigInt.asUintN(64, state * 0x2545f4914f6cdd1dn));
  }
}

test("join after split is the identity on 16 boundary values", () => {
  assert.equal(BOUNDARY.length, 16);
  for (const v of BOUNDARY) {
    const [low, high] = splitI64(v);
    assert.equal(joinI64(low, high), v, `value ${v}`);
  }
});

test("join after split is the identity on 10000 random values", () => {
  let n = 0;
  for (const v of randomI64(10000)) {
    const [low, high] = splitI64(v);
    assert.equal(joinI64(low, high), v, `value ${v}`);
    n++;
  }
  assert.equal(n, 10000);
});

test("known splits", () => {
  assert.deepEqual(splitI64(2n ** 32n + 5n), [5, 1]);
  assert.deepEqual(splitI64(-1n), [-1, -1]);
  assert.deepEqual(splitI64(7n), [7, 0]);
});

test("i64 values cross the hook boundary intact", () => {
  const returned: WasmValue[][] = [];
  const consts: WasmValue[] = [];
  const { results } = runInstrumented("factorial_i64", {
    return_(_loc, rs) { returned.push(rs); },
    const_(_loc, v) { if (typeof v === "bigint") consts.push(v); },
  }, [["run", [20]]]);
  assert.equal(results[0], 2432902008176640000n);
  assert.ok(consts.includes(1n));   // the accumulator seed observed as BigInt

  const observed: WasmValue[] = [];
  const sel = runInstrumented("select_i64", {
    select(_loc, _cond, first, second) { observed.push(first, second); },
  }, [["run", [1]], ["run", [0]]]);
  assert.deepEqual(sel.results, [2n ** 35n, -7n]);
  assert.deepEqual(observed, [2n ** 35n, -7n, 2n ** 35n, -7n]);
});
