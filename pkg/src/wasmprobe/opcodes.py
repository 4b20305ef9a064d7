"""The WebAssembly 1.0 (MVP) opcode table.

One entry per instruction: binary opcode, category driving decode/typing/
instrumentation, and the concrete stack signature for monomorphic ops
(None for context-dependent ones). Mnemonics follow the MVP-era text names
(get_local, i32.wrap/i64, ...); these strings are also what analyses see.
"""

from __future__ import annotations

from typing import NamedTuple

from .ir import F32, F64, I32, I64, ValType


class OpInfo(NamedTuple):
    code: int
    category: str
    ins: tuple[ValType, ...] | None
    outs: tuple[ValType, ...] | None
    width: int | None = None    # natural access width in bytes (load/store)


def _op(code, category, ins=None, outs=None, width=None):
    return OpInfo(code, category, ins, outs, width)


OPS: dict[str, OpInfo] = {
    "unreachable":   _op(0x00, "unreachable", (), ()),
    "nop":           _op(0x01, "nop", (), ()),
    "block":         _op(0x02, "block"),
    "loop":          _op(0x03, "loop"),
    "if":            _op(0x04, "if"),
    "else":          _op(0x05, "else"),
    "end":           _op(0x0B, "end"),
    "br":            _op(0x0C, "br"),
    "br_if":         _op(0x0D, "br_if"),
    "br_table":      _op(0x0E, "br_table"),
    "return":        _op(0x0F, "return"),
    "call":          _op(0x10, "call"),
    "call_indirect": _op(0x11, "call_indirect"),
    "drop":          _op(0x1A, "drop"),
    "select":        _op(0x1B, "select"),

    "get_local":     _op(0x20, "local"),
    "set_local":     _op(0x21, "local"),
    "tee_local":     _op(0x22, "local"),
    "get_global":    _op(0x23, "global"),
    "set_global":    _op(0x24, "global"),

    "i32.load":      _op(0x28, "load", (I32,), (I32,), 4),
    "i64.load":      _op(0x29, "load", (I32,), (I64,), 8),
    "f32.load":      _op(0x2A, "load", (I32,), (F32,), 4),
    "f64.load":      _op(0x2B, "load", (I32,), (F64,), 8),
    "i32.load8_s":   _op(0x2C, "load", (I32,), (I32,), 1),
    "i32.load8_u":   _op(0x2D, "load", (I32,), (I32,), 1),
    "i32.load16_s":  _op(0x2E, "load", (I32,), (I32,), 2),
    "i32.load16_u":  _op(0x2F, "load", (I32,), (I32,), 2),
    "i64.load8_s":   _op(0x30, "load", (I32,), (I64,), 1),
    "i64.load8_u":   _op(0x31, "load", (I32,), (I64,), 1),
    "i64.load16_s":  _op(0x32, "load", (I32,), (I64,), 2),
    "i64.load16_u":  _op(0x33, "load", (I32,), (I64,), 2),
    "i64.load32_s":  _op(0x34, "load", (I32,), (I64,), 4),
    "i64.load32_u":  _op(0x35, "load", (I32,), (I64,), 4),
    "i32.store":     _op(0x36, "store", (I32, I32), (), 4),
    "i64.store":     _op(0x37, "store", (I32, I64), (), 8),
    "f32.store":     _op(0x38, "store", (I32, F32), (), 4),
    "f64.store":     _op(0x39, "store", (I32, F64), (), 8),
    "i32.store8":    _op(0x3A, "store", (I32, I32), (), 1),
    "i32.store16":   _op(0x3B, "store", (I32, I32), (), 2),
    "i64.store8":    _op(0x3C, "store", (I32, I64), (), 1),
    "i64.store16":   _op(0x3D, "store", (I32, I64), (), 2),
    "i64.store32":   _op(0x3E, "store", (I32, I64), (), 4),
    "memory.size":   _op(0x3F, "memory_size", (), (I32,)),
    "memory.grow":   _op(0x40, "memory_grow", (I32,), (I32,)),

    "i32.const":     _op(0x41, "const", (), (I32,)),
    "i64.const":     _op(0x42, "const", (), (I64,)),
    "f32.const":     _op(0x43, "const", (), (F32,)),
    "f64.const":     _op(0x44, "const", (), (F64,)),

    "i32.eqz":       _op(0x45, "unary", (I32,), (I32,)),
    "i32.eq":        _op(0x46, "binary", (I32, I32), (I32,)),
    "i32.ne":        _op(0x47, "binary", (I32, I32), (I32,)),
    "i32.lt_s":      _op(0x48, "binary", (I32, I32), (I32,)),
    "i32.lt_u":      _op(0x49, "binary", (I32, I32), (I32,)),
    "i32.gt_s":      _op(0x4A, "binary", (I32, I32), (I32,)),
    "i32.gt_u":      _op(0x4B, "binary", (I32, I32), (I32,)),
    "i32.le_s":      _op(0x4C, "binary", (I32, I32), (I32,)),
    "i32.le_u":      _op(0x4D, "binary", (I32, I32), (I32,)),
    "i32.ge_s":      _op(0x4E, "binary", (I32, I32), (I32,)),
    "i32.ge_u":      _op(0x4F, "binary", (I32, I32), (I32,)),

    "i64.eqz":       _op(0x50, "unary", (I64,), (I32,)),
    "i64.eq":        _op(0x51, "binary", (I64, I64), (I32,)),
    "i64.ne":        _op(0x52, "binary", (I64, I64), (I32,)),
    "i64.lt_s":      _op(0x53, "binary", (I64, I64), (I32,)),
    "i64.lt_u":      _op(0x54, "binary", (I64, I64), (I32,)),
    "i64.gt_s":      _op(0x55, "binary", (I64, I64), (I32,)),
    "i64.gt_u":      _op(0x56, "binary", (I64, I64), (I32,)),
    "i64.le_s":      _op(0x57, "binary", (I64, I64), (I32,)),
    "i64.le_u":      _op(0x58, "binary", (I64, I64), (I32,)),
    "i64.ge_s":      _op(0x59, "binary", (I64, I64), (I32,)),
    "i64.ge_u":      _op(0x5A, "binary", (I64, I64), (I32,)),

    "f32.eq":        _op(0x5B, "binary", (F32, F32), (I32,)),
    "f32.ne":        _op(0x5C, "binary", (F32, F32), (I32,)),
    "f32.lt":        _op(0x5D, "binary", (F32, F32), (I32,)),
    "f32.gt":        _op(0x5E, "binary", (F32, F32), (I32,)),
    "f32.le":        _op(0x5F, "binary", (F32, F32), (I32,)),
    "f32.ge":        _op(0x60, "binary", (F32, F32), (I32,)),
    "f64.eq":        _op(0x61, "binary", (F64, F64), (I32,)),
    "f64.ne":        _op(0x62, "binary", (F64, F64), (I32,)),
    "f64.lt":        _op(0x63, "binary", (F64, F64), (I32,)),
    "f64.gt":        _op(0x64, "binary", (F64, F64), (I32,)),
    "f64.le":        _op(0x65, "binary", (F64, F64), (I32,)),
    "f64.ge":        _op(0x66, "binary", (F64, F64), (I32,)),

    "i32.clz":       _op(0x67, "unary", (I32,), (I32,)),
    "i32.ctz":       _op(0x68, "unary", (I32,), (I32,)),
    "i32.popcnt":    _op(0x69, "unary", (I32,), (I32,)),
    "i32.add":       _op(0x6A, "binary", (I32, I32), (I32,)),
    "i32.sub":       _op(0x6B, "binary", (I32, I32), (I32,)),
    "i32.mul":       _op(0x6C, "binary", (I32, I32), (I32,)),
    "i32.div_s":     _op(0x6D, "binary", (I32, I32), (I32,)),
    "i32.div_u":     _op(0x6E, "binary", (I32, I32), (I32,)),
    "i32.rem_s":     _op(0x6F, "binary", (I32, I32), (I32,)),
    "i32.rem_u":     _op(0x70, "binary", (I32, I32), (I32,)),
    "i32.and":       _op(0x71, "binary", (I32, I32), (I32,)),
    "i32.or":        _op(0x72, "binary", (I32, I32), (I32,)),
    "i32.xor":       _op(0x73, "binary", (I32, I32), (I32,)),
    "i32.shl":       _op(0x74, "binary", (I32, I32), (I32,)),
    "i32.shr_s":     _op(0x75, "binary", (I32, I32), (I32,)),
    "i32.shr_u":     _op(0x76, "binary", (I32, I32), (I32,)),
    "i32.rotl":      _op(0x77, "binary", (I32, I32), (I32,)),
    "i32.rotr":      _op(0x78, "binary", (I32, I32), (I32,)),

    "i64.clz":       _op(0x79, "unary", (I64,), (I64,)),
    "i64.ctz":       _op(0x7A, "unary", (I64,), (I64,)),
    "i64.popcnt":    _op(0x7B, "unary", (I64,), (I64,)),
    "i64.add":       _op(0x7C, "binary", (I64, I64), (I64,)),
    "i64.sub":       _op(0x7D, "binary", (I64, I64), (I64,)),
    "i64.mul":       _op(0x7E, "binary", (I64, I64), (I64,)),
    "i64.div_s":     _op(0x7F, "binary", (I64, I64), (I64,)),
    "i64.div_u":     _op(0x80, "binary", (I64, I64), (I64,)),
    "i64.rem_s":     _op(0x81, "binary", (I64, I64), (I64,)),
    "i64.rem_u":     _op(0x82, "binary", (I64, I64), (I64,)),
    "i64.and":       _op(0x83, "binary", (I64, I64), (I64,)),
    "i64.or":        _op(0x84, "binary", (I64, I64), (I64,)),
    "i64.xor":       _op(0x85, "binary", (I64, I64), (I64,)),
    "i64.shl":       _op(0x86, "binary", (I64, I64), (I64,)),
    "i64.shr_s":     _op(0x87, "binary", (I64, I64), (I64,)),
    "i64.shr_u":     _op(0x88, "binary", (I64, I64), (I64,)),
    "i64.rotl":      _op(0x89, "binary", (I64, I64), (I64,)),
    "i64.rotr":      _op(0x8A, "binary", (I64, I64), (I64,)),

    "f32.abs":       _op(0x8B, "unary", (F32,), (F32,)),
    "f32.neg":       _op(0x8C, "unary", (F32,), (F32,)),
    "f32.ceil":      _op(0x8D, "unary", (F32,), (F32,)),
    "f32.floor":     _op(0x8E, "unary", (F32,), (F32,)),
    "f32.trunc":     _op(0x8F, "unary", (F32,), (F32,)),
    "f32.nearest":   _op(0x90, "unary", (F32,), (F32,)),
    "f32.sqrt":      _op(0x91, "unary", (F32,), (F32,)),
    "f32.add":       _op(0x92, "binary", (F32, F32), (F32,)),
    "f32.sub":       _op(0x93, "binary", (F32, F32), (F32,)),
    "f32.mul":       _op(0x94, "binary", (F32, F32), (F32,)),
    "f32.div":       _op(0x95, "binary", (F32, F32), (F32,)),
    "f32.min":       _op(0x96, "binary", (F32, F32), (F32,)),
    "f32.max":       _op(0x97, "binary", (F32, F32), (F32,)),
    "f32.copysign":  _op(0x98, "binary", (F32, F32), (F32,)),

    "f64.abs":       _op(0x99, "unary", (F64,), (F64,)),
    "f64.neg":       _op(0x9A, "unary", (F64,), (F64,)),
    "f64.ceil":      _op(0x9B, "unary", (F64,), (F64,)),
    "f64.floor":     _op(0x9C, "unary", (F64,), (F64,)),
    "f64.trunc":     _op(0x9D, "unary", (F64,), (F64,)),
    "f64.nearest":   _op(0x9E, "unary", (F64,), (F64,)),
    "f64.sqrt":      _op(0x9F, "unary", (F64,), (F64,)),
    "f64.add":       _op(0xA0, "binary", (F64, F64), (F64,)),
    "f64.sub":       _op(0xA1, "binary", (F64, F64), (F64,)),
    "f64.mul":       _op(0xA2, "binary", (F64, F64), (F64,)),
    "f64.div":       _op(0xA3, "binary", (F64, F64), (F64,)),
    "f64.min":       _op(0xA4, "binary", (F64, F64), (F64,)),
    "f64.max":       _op(0xA5, "binary", (F64, F64), (F64,)),
    "f64.copysign":  _op(0xA6, "binary", (F64, F64), (F64,)),

    "i32.wrap/i64":        _op(0xA7, "unary", (I64,), (I32,)),
    "i32.trunc_s/f32":     _op(0xA8, "unary", (F32,), (I32,)),
    "i32.trunc_u/f32":     _op(0xA9, "unary", (F32,), (I32,)),
    "i32.trunc_s/f64":     _op(0xAA, "unary", (F64,), (I32,)),
    "i32.trunc_u/f64":     _op(0xAB, "unary", (F64,), (I32,)),
    "i64.extend_s/i32":    _op(0xAC, "unary", (I32,), (I64,)),
    "i64.extend_u/i32":    _op(0xAD, "unary", (I32,), (I64,)),
    "i64.trunc_s/f32":     _op(0xAE, "unary", (F32,), (I64,)),
    "i64.trunc_u/f32":     _op(0xAF, "unary", (F32,), (I64,)),
    "i64.trunc_s/f64":     _op(0xB0, "unary", (F64,), (I64,)),
    "i64.trunc_u/f64":     _op(0xB1, "unary", (F64,), (I64,)),
    "f32.convert_s/i32":   _op(0xB2, "unary", (I32,), (F32,)),
    "f32.convert_u/i32":   _op(0xB3, "unary", (I32,), (F32,)),
    "f32.convert_s/i64":   _op(0xB4, "unary", (I64,), (F32,)),
    "f32.convert_u/i64":   _op(0xB5, "unary", (I64,), (F32,)),
    "f32.demote/f64":      _op(0xB6, "unary", (F64,), (F32,)),
    "f64.convert_s/i32":   _op(0xB7, "unary", (I32,), (F64,)),
    "f64.convert_u/i32":   _op(0xB8, "unary", (I32,), (F64,)),
    "f64.convert_s/i64":   _op(0xB9, "unary", (I64,), (F64,)),
    "f64.convert_u/i64":   _op(0xBA, "unary", (I64,), (F64,)),
    "f64.promote/f32":     _op(0xBB, "unary", (F32,), (F64,)),
    "i32.reinterpret/f32": _op(0xBC, "unary", (F32,), (I32,)),
    "i64.reinterpret/f64": _op(0xBD, "unary", (F64,), (I64,)),
    "f32.reinterpret/i32": _op(0xBE, "unary", (I32,), (F32,)),
    "f64.reinterpret/i64": _op(0xBF, "unary", (I64,), (F64,)),
}

BY_CODE: dict[int, str] = {info.code: name for name, info in OPS.items()}

CONST_OP = {I32: "i32.const", I64: "i64.const", F32: "f32.const", F64: "f64.const"}

VALTYPE_CODES = {I32: 0x7F, I64: 0x7E, F32: 0x7D, F64: 0x7C}
VALTYPE_BY_CODE = {v: k for k, v in VALTYPE_CODES.items()}


def category(op: str) -> str:
    return OPS[op].category
