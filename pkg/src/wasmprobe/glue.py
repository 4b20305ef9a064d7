"""Emit the host-glue script for an instrumented module.

The glue is a single self-contained JavaScript file exposing a runtime
object (CommonJS export and `globalThis.__wasabi_runtime`). It contains the
module metadata, one generated low-level function per monomorphized hook
under the `__wasabi_hooks` import namespace, and the dispatch logic that
rebuilds i64 values, location/target/memarg objects and invokes whichever
high-level callbacks the analysis defines. docs/glue.md documents the
contract.
"""

from __future__ import annotations

import json

from .hooks import HookKind, HookRef, HookRegistry
from .instrument import ModuleMetadata
from .ir import I64, ValType

_PRELUDE = """\
"use strict";
(function (root) {
var M = %METADATA%;
var A = {};
function L(f, i) { return { func: f, instr: i }; }
function B(v) { return v !== 0; }
function J(lo, hi) { return BigInt.asIntN(64, (BigInt(hi >>> 0) << 32n) | BigInt(lo >>> 0)); }
function T(f, label, instr) { return { label: label, location: L(f, instr) }; }
function ends(f, list) {
  var cb = A.end;
  if (!cb) return;
  for (var k = 0; k < list.length; k++) {
    var e = list[k];
    cb(L(f, e[2]), e[0], L(f, e[1]));
  }
}
"""

_POSTLUDE = """\
var RT = {
  metadata: M,
  analysis: A,
  hooks: H,
  instance: null,
  table: null,
  memory: null,
  setAnalysis: function (a) {
    A = a || {};
    RT.analysis = A;
    return RT;
  },
  bindInstance: function (inst) {
    RT.instance = inst;
    RT.table = M.tableExportName ? inst.exports[M.tableExportName] : null;
    RT.memory = M.memoryExportName ? inst.exports[M.memoryExportName] : null;
    return RT;
  },
  importObject: function (extra) {
    var obj = {};
    if (extra) { for (var k in extra) { obj[k] = extra[k]; } }
    obj["__wasabi_hooks"] = H;
    return obj;
  },
  resolveTable: function (idx) {
    if (idx === null || idx === undefined) { return null; }
    var v = M.table[String(idx)];
    return v === undefined ? null : v;
  }
};
root.__wasabi_runtime = RT;
if (typeof module !== "undefined" && module.exports) { module.exports = RT; }
})(typeof globalThis !== "undefined" ? globalThis : this);
"""


def _arg_names(params: tuple[ValType, ...]) -> tuple[list[str], list[str]]:
    """JS parameter names for the lowered signature and per-param value
    expressions that undo the lowering."""
    names: list[str] = []
    exprs: list[str] = []
    for j, t in enumerate(params):
        if t is I64:
            names += [f"a{j}", f"b{j}"]
            exprs.append(f"J(a{j}, b{j})")
        else:
            names.append(f"a{j}")
            exprs.append(f"a{j}")
    return names, exprs


def _dispatch_body(ref: HookRef, exprs: list[str]) -> list[str]:
    kind = ref.kind
    cb = f"A.{kind.value}"
    loc = "L(f, i)"

    if kind == HookKind.BR_TABLE:
        return [
            "var e = M.brTables[a0];",
            "var sel = a1 < e.targets.length ? e.targets[a1] : e.default;",
            f"var cb = {cb};",
            f"if (cb) cb({loc}, "
            "e.targets.map(function (t) { return T(f, t.label, t.instr); }), "
            "T(f, e.default.label, e.default.instr), a1);",
            "ends(f, sel.ended);",
        ]

    if kind in (HookKind.START, HookKind.NOP, HookKind.UNREACHABLE):
        call = f"cb({loc});"
    elif kind == HookKind.IF:
        call = f"cb({loc}, B({exprs[0]}));"
    elif kind == HookKind.BR:
        call = f"cb({loc}, T(f, {exprs[0]}, {exprs[1]}));"
    elif kind == HookKind.BR_IF:
        call = f"cb({loc}, T(f, {exprs[0]}, {exprs[1]}), B({exprs[2]}));"
    elif kind == HookKind.BEGIN:
        call = f'cb({loc}, "{ref.op}");'
    elif kind == HookKind.END:
        call = f'cb({loc}, "{ref.op}", L(f, {exprs[0]}));'
    elif kind == HookKind.MEMORY_SIZE:
        call = f"cb({loc}, {exprs[0]});"
    elif kind == HookKind.MEMORY_GROW:
        call = f"cb({loc}, {exprs[0]}, {exprs[1]});"
    elif kind in (HookKind.CONST, HookKind.DROP):
        call = f"cb({loc}, {exprs[0]});"
    elif kind == HookKind.SELECT:
        call = f"cb({loc}, B({exprs[0]}), {exprs[1]}, {exprs[2]});"
    elif kind == HookKind.UNARY:
        call = f'cb({loc}, "{ref.op}", {exprs[0]}, {exprs[1]});'
    elif kind == HookKind.BINARY:
        call = f'cb({loc}, "{ref.op}", {exprs[0]}, {exprs[1]}, {exprs[2]});'
    elif kind in (HookKind.LOAD, HookKind.STORE):
        call = (f'cb({loc}, "{ref.op}", '
                f"{{ addr: {exprs[0]}, offset: {exprs[1]} }}, {exprs[2]});")
    elif kind in (HookKind.LOCAL, HookKind.GLOBAL):
        call = f'cb({loc}, "{ref.op}", {exprs[0]}, {exprs[1]});'
    elif kind == HookKind.CALL_PRE:
        args = ", ".join(exprs[2:])
        return [
            f"var cb = {cb};",
            "if (!cb) return;",
            f"var tb = {exprs[1]} === -1 ? null : {exprs[1]};",
            f"var fn = {exprs[0]} === -1 ? RT.resolveTable(tb) : {exprs[0]};",
            f"cb({loc}, fn, [{args}], tb);",
        ]
    elif kind in (HookKind.CALL_POST, HookKind.RETURN):
        call = f"cb({loc}, [{', '.join(exprs)}]);"
    else:
        raise ValueError(f"no dispatch rule for {kind}")

    return [f"var cb = {cb};", f"if (cb) {call}"]


def emit_hook_function(ref: HookRef) -> str:
    names, exprs = _arg_names(ref.params)
    params = ", ".join(["f", "i"] + names)
    body = "\n".join(f"  {line}" for line in _dispatch_body(ref, exprs))
    return f"{json.dumps(ref.symbol)}: function ({params}) {{\n{body}\n}}"


def emit_glue(registry: HookRegistry, metadata: ModuleMetadata) -> str:
    meta_json = json.dumps(metadata.to_json_dict(), indent=1)
    parts = [_PRELUDE.replace("%METADATA%", meta_json)]
    hook_functions = [emit_hook_function(ref) for ref in registry.refs()]
    parts.append("var H = {\n" + ",\n".join(hook_functions) + "\n};\n"
                 if hook_functions else "var H = {};\n")
    parts.append(_POSTLUDE)
    return "".join(parts)
