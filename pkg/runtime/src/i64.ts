/**
 * 64-bit integer splitting and joining.
 *
 * Instrumented code passes i64 values to hooks as two i32 halves: the low
 * half via wrap, the high half via an arithmetic 32-bit right shift plus
 * wrap. `splitI64` mirrors those wasm semantics exactly; `joinI64` is its
 * inverse and is what the glue applies before dispatch.
 */

export function splitI64(value: bigint): [low: number, high: number] {
  const v = BigInt.asIntN(64, value);
  const low = Number(BigInt.asIntN(32, v));
  const high = Number(BigInt.asIntN(32, v >> 32n));
  return [low, high];
}

export function joinI64(low: number, high: number): bigint {
  return BigInt.asIntN(64, (BigInt(high >>> 0) << 32n) | BigInt(low >>> 0));
}
