"""Hand-rolled WebAssembly 1.0 byte assembler for building test inputs.

Deliberately independent of the package under test: it has its own opcode
numbers, LEB128 writer, and section plumbing, so corpus bytes serve as an
oracle for the decoder rather than an echo of it. Instructions are written
as tuples: ("i32.const", 5), ("block",), ("block", "i32"), ("br_table",
[1, 0], 0), ("i32.load", 2, 8), ("call", 0), ...
"""

from __future__ import annotations

import struct

VALTYPE = {"i32": 0x7F, "i64": 0x7E, "f32": 0x7D, "f64": 0x7C}

# mnemonic -> opcode byte, straight from the binary-format listing
OPCODE = {
    "unreachable": 0x00, "nop": 0x01, "block": 0x02, "loop": 0x03, "if": 0x04,
    "else": 0x05, "end": 0x0B, "br": 0x0C, "br_if": 0x0D, "br_table": 0x0E,
    "return": 0x0F, "call": 0x10, "call_indirect": 0x11,
    "drop": 0x1A, "select": 0x1B,
    "get_local": 0x20, "set_local": 0x21, "tee_local": 0x22,
    "get_global": 0x23, "set_global": 0x24,
    "i32.load": 0x28, "i64.load": 0x29, "f32.load": 0x2A, "f64.load": 0x2B,
    "i32.load8_s": 0x2C, "i32.load8_u": 0x2D, "i32.load16_s": 0x2E,
    "i32.load16_u": 0x2F, "i64.load8_s": 0x30, "i64.load8_u": 0x31,
    "i64.load16_s": 0x32, "i64.load16_u": 0x33, "i64.load32_s": 0x34,
    "i64.load32_u": 0x35,
    "i32.store": 0x36, "i64.store": 0x37, "f32.store": 0x38, "f64.store": 0x39,
    "i32.store8": 0x3A, "i32.store16": 0x3B, "i64.store8": 0x3C,
    "i64.store16": 0x3D, "i64.store32": 0x3E,
    "memory.size": 0x3F, "memory.grow": 0x40,
    "i32.const": 0x41, "i64.const": 0x42, "f32.const": 0x43, "f64.const": 0x44,
    "i32.eqz": 0x45, "i32.eq": 0x46, "i32.ne": 0x47, "i32.lt_s": 0x48,
    "i32.lt_u": 0x49, "i32.gt_s": 0x4A, "i32.gt_u": 0x4B, "i32.le_s": 0x4C,
    "i32.le_u": 0x4D, "i32.ge_s": 0x4E, "i32.ge_u": 0x4F,
    "i64.eqz": 0x50, "i64.eq": 0x51, "i64.ne": 0x52, "i64.lt_s": 0x53,
    "i64.lt_u": 0x54, "i64.gt_s": 0x55, "i64.gt_u": 0x56, "i64.le_s": 0x57,
    "i64.le_u": 0x58, "i64.ge_s": 0x59, "i64.ge_u": 0x5A,
    "f32.eq": 0x5B, "f32.ne": 0x5C, "f32.lt": 0x5D, "f32.gt": 0x5E,
    "f32.le": 0x5F, "f32.ge": 0x60,
    "f64.eq": 0x61, "f64.ne": 0x62, "f64.lt": 0x63, "f64.gt": 0x64,
    "f64.le": 0x65, "f64.ge": 0x66,
    "i32.clz": 0x67, "i32.ctz": 0x68, "i32.popcnt": 0x69, "i32.add": 0x6A,
    "i32.sub": 0x6B, "i32.mul": 0x6C, "i32.div_s": 0x6D, "i32.div_u": 0x6E,
    "i32.rem_s": 0x6F, "i32.rem_u": 0x70, "i32.and": 0x71, "i32.or": 0x72,
    "i32.xor": 0x73, "i32.shl": 0x74, "i32.shr_s": 0x75, "i32.shr_u": 0x76,
    "i32.rotl": 0x77, "i32.rotr": 0x78,
    "i64.clz": 0x79, "i64.ctz": 0x7A, "i64.popcnt": 0x7B, "i64.add": 0x7C,
    "i64.sub": 0x7D, "i64.mul": 0x7E, "i64.div_s": 0x7F, "i64.div_u": 0x80,
    "i64.rem_s": 0x81, "i64.rem_u": 0x82, "i64.and": 0x83, "i64.or": 0x84,
    "i64.xor": 0x85, "i64.shl": 0x86, "i64.shr_s": 0x87, "i64.shr_u": 0x88,
    "i64.rotl": 0x89, "i64.rotr": 0x8A,
    "f32.abs": 0x8B, "f32.neg": 0x8C, "f32.ceil": 0x8D, "f32.floor": 0x8E,
    "f32.trunc": 0x8F, "f32.nearest": 0x90, "f32.sqrt": 0x91, "f32.add": 0x92,
    "f32.sub": 0x93, "f32.mul": 0x94, "f32.div": 0x95, "f32.min": 0x96,
    "f32.max": 0x97, "f32.copysign": 0x98,
    "f64.abs": 0x99, "f64.neg": 0x9A, "f64.ceil": 0x9B, "f64.floor": 0x9C,
    "f64.trunc": 0x9D, "f64.nearest": 0x9E, "f64.sqrt": 0x9F, "f64.add": 0xA0,
    "f64.sub": 0xA1, "f64.mul": 0xA2, "f64.div": 0xA3, "f64.min": 0xA4,
    "f64.max": 0xA5, "f64.copysign": 0xA6,
    "i32.wrap/i64": 0xA7, "i32.trunc_s/f32": 0xA8, "i32.trunc_u/f32": 0xA9,
    "i32.trunc_s/f64": 0xAA, "i32.trunc_u/f64": 0xAB,
    "i64.extend_s/i32": 0xAC, "i64.extend_u/i32": 0xAD,
    "i64.trunc_s/f32": 0xAE, "i64.trunc_u/f32": 0xAF,
    "i64.trunc_s/f64": 0xB0, "i64.trunc_u/f64": 0xB1,
    "f32.convert_s/i32": 0xB2, "f32.convert_u/i32": 0xB3,
    "f32.convert_s/i64": 0xB4, "f32.convert_u/i64": 0xB5, "f32.demote/f64": 0xB6,
    "f64.convert_s/i32": 0xB7, "f64.convert_u/i32": 0xB8,
    "f64.convert_s/i64": 0xB9, "f64.convert_u/i64": 0xBA, "f64.promote/f32": 0xBB,
    "i32.reinterpret/f32": 0xBC, "i64.reinterpret/f64": 0xBD,
    "f32.reinterpret/i32": 0xBE, "f64.reinterpret/i64": 0xBF,
}

_BLOCKY = {"block", "loop", "if"}
_LABELED = {"br", "br_if"}
_INDEXED = {"call", "get_local", "set_local", "tee_local", "get_global",
            "set_global"}
_MEMARG = {op for op in OPCODE if ".load" in op or ".store" in op}
_RESERVED = {"memory.size", "memory.grow"}


def leb_u(value: int, pad: int = 0) -> bytes:
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            if pad:
                out.append(byte | 0x80)
                out.extend([0x80] * (pad - 1))
                out.append(0x00)
            else:
                out.append(byte)
            return bytes(out)


def leb_s(value: int) -> bytes:
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        done = (value == 0 and not byte & 0x40) or (value == -1 and byte & 0x40)
        out.append(byte if done else byte | 0x80)
        if done:
            return bytes(out)


def asm(instrs, pad: int = 0) -> bytes:
    """Assemble a list of instruction tuples (without a trailing end)."""
    out = bytearray()
    for item in instrs:
        if isinstance(item, str):
            item = (item,)
        op, args = item[0], item[1:]
        out.append(OPCODE[op])
        if op in _BLOCKY:
            out.append(VALTYPE[args[0]] if args else 0x40)
        elif op in _LABELED or op in _INDEXED:
            out += leb_u(args[0], pad)
        elif op == "br_table":
            labels, default = args
            out += leb_u(len(labels))
            for lab in labels:
                out += leb_u(lab)
            out += leb_u(default)
        elif op == "call_indirect":
            out += leb_u(args[0])
            out.append(0x00)
        elif op in _MEMARG:
            align, offset = args if args else (0, 0)
            out += leb_u(align)
            out += leb_u(offset, pad)
        elif op in _RESERVED:
            out.append(0x00)
        elif op == "i32.const":
            out += leb_s(args[0])
        elif op == "i64.const":
            out += leb_s(args[0])
        elif op == "f32.const":
            out += struct.pack("<f", args[0])
        elif op == "f64.const":
            out += struct.pack("<d", args[0])
    return bytes(out)


def _vec(items: list[bytes]) -> bytes:
    return leb_u(len(items)) + b"".join(items)


def _name(text: str) -> bytes:
    raw = text.encode()
    return leb_u(len(raw)) + raw


def _limits(minimum, maximum) -> bytes:
    if maximum is None:
        return b"\x00" + leb_u(minimum)
    return b"\x01" + leb_u(minimum) + leb_u(maximum)


class ModuleBuilder:
    def __init__(self, pad: int = 0):
        self.pad = pad
        self._types: list[tuple] = []
        self._imports: list[bytes] = []
        self._func_types: list[int] = []
        self._bodies: list[bytes] = []
        self._table: bytes | None = None
        self._memory: bytes | None = None
        self._globals: list[bytes] = []
        self._exports: list[bytes] = []
        self._start: int | None = None
        self._elems: list[bytes] = []
        self._datas: list[bytes] = []
        self._customs: list[tuple[str, bytes]] = []
        self.func_count = 0

    def type_idx(self, params, results) -> int:
        key = (tuple(params), tuple(results))
        if key not in self._types:
            self._types.append(key)
        return self._types.index(key)

    def import_func(self, module, name, params=(), results=()) -> int:
        ti = self.type_idx(params, results)
        self._imports.append(_name(module) + _name(name) + b"\x00" + leb_u(ti))
        idx = self.func_count
        self.func_count += 1
        return idx

    def func(self, params=(), results=(), locals=(), body=(), export=None) -> int:
        ti = self.type_idx(params, results)
        self._func_types.append(ti)
        locals_part = _vec([leb_u(1) + bytes([VALTYPE[t]]) for t in locals])
        code = locals_part + asm(body, self.pad) + bytes([OPCODE["end"]])
        self._bodies.append(leb_u(len(code), self.pad) + code)
        idx = self.func_count
        self.func_count += 1
        if export is not None:
            self.export(export, 0, idx)
        return idx

    def table(self, minimum, maximum=None):
        self._table = b"\x70" + _limits(minimum, maximum)

    def memory(self, minimum, maximum=None, export=None):
        self._memory = _limits(minimum, maximum)
        if export is not None:
            self.export(export, 2, 0)

    def global_(self, valtype, mutable, init) -> int:
        init_code = asm([init]) + bytes([OPCODE["end"]])
        self._globals.append(bytes([VALTYPE[valtype], int(mutable)]) + init_code)
        return len(self._globals) - 1

    def export(self, name, kind, idx):
        self._exports.append(_name(name) + bytes([kind]) + leb_u(idx))

    def start(self, fidx):
        self._start = fidx

    def elem(self, offset, funcs):
        expr = asm([("i32.const", offset)]) + bytes([OPCODE["end"]])
        self._elems.append(leb_u(0) + expr + _vec([leb_u(f) for f in funcs]))

    def data(self, offset, payload: bytes):
        expr = asm([("i32.const", offset)]) + bytes([OPCODE["end"]])
        self._datas.append(leb_u(0) + expr + leb_u(len(payload)) + payload)

    def custom(self, name, payload: bytes):
        self._customs.append((name, payload))

    def build(self) -> bytes:
        out = bytearray(b"\x00asm\x01\x00\x00\x00")

        def section(sid, payload):
            out.append(sid)
            out.extend(leb_u(len(payload), self.pad))
            out.extend(payload)

        if self._types:
            entries = [
                b"\x60" + _vec([bytes([VALTYPE[p]]) for p in ps])
                + _vec([bytes([VALTYPE[r]]) for r in rs])
                for ps, rs in self._types
            ]
            section(1, _vec(entries))
        if self._imports:
            section(2, _vec(self._imports))
        if self._func_types:
            section(3, _vec([leb_u(t) for t in self._func_types]))
        if self._table is not None:
            section(4, _vec([self._table]))
        if self._memory is not None:
            section(5, _vec([self._memory]))
        if self._globals:
            section(6, _vec(self._globals))
        if self._exports:
            section(7, _vec(self._exports))
        if self._start is not None:
            section(8, leb_u(self._start))
        if self._elems:
            section(9, _vec(self._elems))
        if self._bodies:
            section(10, _vec(self._bodies))
        if self._datas:
            section(11, _vec(self._datas))
        for name, payload in self._customs:
            section(0, _name(name) + payload)
        return bytes(out)
