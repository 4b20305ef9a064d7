"""Binary format decoder and encoder.

The decoder is strict on structure (magic, section order, exact section and
body sizes, index bounds) but lenient about padded LEB128 immediates. The
encoder is deterministic and always emits canonical shortest-form LEB128,
so encode(decode(encode(m))) is byte-identical to encode(m).
"""

from __future__ import annotations

import struct

from . import leb128
from .errors import (DecodeError, EncodeError, MalformedMagic, OutOfBoundsIndex,
                     TruncatedSection, UnknownOpcode)
from .ir import (CustomSection, DataSegment, ElemSegment, Export, EXPORT_KINDS, I32,
                 FuncType, Function, Global, Instr, Limits, Memory, Module, Table)
from .opcodes import BY_CODE, OPS, VALTYPE_BY_CODE, VALTYPE_CODES

MAGIC = b"\x00asm"
VERSION = b"\x01\x00\x00\x00"

_SECTION_IDS = {
    1: "type", 2: "import", 3: "function", 4: "table", 5: "memory",
    6: "global", 7: "export", 8: "start", 9: "element", 10: "code", 11: "data",
}

MAX_MEMORY_PAGES = 65536


class _Reader:
    def __init__(self, data: bytes, pos: int = 0, end: int | None = None):
        self.data = data
        self.pos = pos
        self.end = len(data) if end is None else end

    def eof(self) -> bool:
        return self.pos >= self.end

    def byte(self) -> int:
        if self.pos >= self.end:
            raise TruncatedSection("unexpected end of input", self.pos)
        b = self.data[self.pos]
        self.pos += 1
        return b

    def bytes(self, n: int) -> bytes:
        if self.pos + n > self.end:
            raise TruncatedSection("unexpected end of input", self.pos)
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return bytes(out)

    def u32(self) -> int:
        value, self.pos = leb128.decode_unsigned(self.data, self.pos, 32)
        if self.pos > self.end:
            raise TruncatedSection("integer crosses section boundary", self.pos)
        return value

    def s32(self) -> int:
        value, self.pos = leb128.decode_signed(self.data, self.pos, 32)
        if self.pos > self.end:
            raise TruncatedSection("integer crosses section boundary", self.pos)
        return value

    def s64(self) -> int:
        value, self.pos = leb128.decode_signed(self.data, self.pos, 64)
        if self.pos > self.end:
            raise TruncatedSection("integer crosses section boundary", self.pos)
        return value

    def name(self) -> str:
        n = self.u32()
        raw = self.bytes(n)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError:
            raise DecodeError("invalid UTF-8 in name", self.pos - n) from None

    def valtype(self):
        pos = self.pos
        code = self.byte()
        if code not in VALTYPE_BY_CODE:
            raise DecodeError(f"invalid value type 0x{code:02x}", pos)
        return VALTYPE_BY_CODE[code]

    def limits(self) -> Limits:
        pos = self.pos
        flag = self.byte()
        if flag not in (0, 1):
            raise DecodeError(f"invalid limits flag 0x{flag:02x}", pos)
        minimum = self.u32()
        maximum = self.u32() if flag else None
        if maximum is not None and maximum < minimum:
            raise DecodeError("limits maximum below minimum", pos)
        return Limits(minimum, maximum)


def decode_instruction(r: _Reader, types: list[FuncType]) -> Instr:
    pos = r.pos
    code = r.byte()
    op = BY_CODE.get(code)
    if op is None:
        raise UnknownOpcode(f"unknown opcode 0x{code:02x}", pos)
    cat = OPS[op].category
    if cat in ("block", "loop", "if"):
        bt_pos = r.pos
        bt = r.byte()
        if bt == 0x40:
            return Instr(op)
        if bt not in VALTYPE_BY_CODE:
            raise DecodeError(f"invalid block type 0x{bt:02x}", bt_pos)
        return Instr(op, block_type=VALTYPE_BY_CODE[bt])
    if cat in ("br", "br_if"):
        return Instr(op, index=r.u32())
    if cat == "br_table":
        labels = tuple(r.u32() for _ in range(r.u32()))
        return Instr(op, labels=labels, default_label=r.u32())
    if cat == "call":
        return Instr(op, index=r.u32())
    if cat == "call_indirect":
        ti_pos = r.pos
        ti = r.u32()
        if ti >= len(types):
            raise OutOfBoundsIndex(f"type index {ti} out of bounds", ti_pos)
        reserved = r.byte()
        if reserved != 0:
            raise DecodeError("call_indirect reserved byte must be 0", r.pos - 1)
        return Instr(op, index=ti, func_type=types[ti])
    if cat in ("local", "global"):
        return Instr(op, index=r.u32())
    if cat in ("load", "store"):
        return Instr(op, align=r.u32(), offset=r.u32())
    if cat in ("memory_size", "memory_grow"):
        reserved = r.byte()
        if reserved != 0:
            raise DecodeError(f"{op} reserved byte must be 0", r.pos - 1)
        return Instr(op)
    if cat == "const":
        if op == "i32.const":
            return Instr(op, value=r.s32())
        if op == "i64.const":
            return Instr(op, value=r.s64())
        if op == "f32.const":
            return Instr(op, value=struct.unpack("<I", r.bytes(4))[0])
        return Instr(op, value=struct.unpack("<Q", r.bytes(8))[0])
    return Instr(op)


def _decode_expr(r: _Reader, types: list[FuncType]) -> list[Instr]:
    """Read instructions up to and including the expression-closing `end`."""
    body = []
    depth = 1
    while True:
        ins = decode_instruction(r, types)
        body.append(ins)
        cat = OPS[ins.op].category
        if cat in ("block", "loop", "if"):
            depth += 1
        elif cat == "end":
            depth -= 1
            if depth == 0:
                return body


def _check_const_expr(expr: list[Instr], globals_so_far: list[Global],
                      want, offset: int) -> None:
    if len(expr) != 2 or expr[-1].op != "end":
        raise DecodeError("initializer must be a single constant instruction", offset)
    ins = expr[0]
    if OPS[ins.op].category == "const":
        produced = OPS[ins.op].outs[0]
    elif ins.op == "get_global":
        if ins.index >= len(globals_so_far):
            raise OutOfBoundsIndex(f"global index {ins.index} out of bounds", offset)
        g = globals_so_far[ins.index]
        if not g.imported or g.mutable:
            raise DecodeError("initializer may only read an imported immutable global", offset)
        produced = g.type
    else:
        raise DecodeError(f"non-constant instruction {ins.op} in initializer", offset)
    if want is not None and produced is not want:
        raise DecodeError(f"initializer type {produced.value}, expected {want.value}", offset)


def decode_module(data: bytes) -> Module:
    if len(data) < 8 or data[:4] != MAGIC:
        raise MalformedMagic("missing \\0asm magic number", 0)
    if data[4:8] != VERSION:
        raise MalformedMagic("unsupported version (want 1)", 4)

    r = _Reader(data, 8)
    m = Module()
    types: list[FuncType] = []
    func_type_indices: list[int] = []
    bodies_seen = False
    last_section = 0
    customs: list[CustomSection] = []

    while not r.eof():
        sec_pos = r.pos
        sec_id = r.byte()
        size = r.u32()
        payload_end = r.pos + size
        if payload_end > r.end:
            raise TruncatedSection(f"section {sec_id} overruns input", sec_pos)
        s = _Reader(data, r.pos, payload_end)

        if sec_id == 0:
            name = s.name()
            customs.append(CustomSection(last_section, name, s.bytes(payload_end - s.pos)))
        elif sec_id in _SECTION_IDS:
            if sec_id <= last_section:
                raise DecodeError(f"section {sec_id} out of order", sec_pos)
            last_section = sec_id
            if sec_id == 1:
                for _ in range(s.u32()):
                    form_pos = s.pos
                    if s.byte() != 0x60:
                        raise DecodeError("function type must begin with 0x60", form_pos)
                    params = tuple(s.valtype() for _ in range(s.u32()))
                    results = tuple(s.valtype() for _ in range(s.u32()))
                    if len(results) > 1:
                        raise DecodeError("multiple results not supported (MVP)", form_pos)
                    types.append(FuncType(params, results))
            elif sec_id == 2:
                for _ in range(s.u32()):
                    module_name = s.name()
                    field = s.name()
                    kind_pos = s.pos
                    kind = s.byte()
                    if kind == 0:
                        ti = s.u32()
                        if ti >= len(types):
                            raise OutOfBoundsIndex(f"type index {ti} out of bounds", kind_pos)
                        m.functions.append(Function(types[ti], [], [], (module_name, field)))
                    elif kind == 1:
                        if s.byte() != 0x70:
                            raise DecodeError("table element type must be funcref", kind_pos)
                        if m.table is not None:
                            raise DecodeError("multiple tables not supported (MVP)", kind_pos)
                        m.table = Table(s.limits(), (module_name, field))
                    elif kind == 2:
                        if m.memory is not None:
                            raise DecodeError("multiple memories not supported (MVP)", kind_pos)
                        lim = s.limits()
                        _check_memory_limits(lim, kind_pos)
                        m.memory = Memory(lim, (module_name, field))
                    elif kind == 3:
                        gt = s.valtype()
                        mut = s.byte()
                        if mut not in (0, 1):
                            raise DecodeError("invalid mutability flag", s.pos - 1)
                        m.globals.append(Global(gt, bool(mut), None, (module_name, field)))
                    else:
                        raise DecodeError(f"unknown import kind {kind}", kind_pos)
            elif sec_id == 3:
                for _ in range(s.u32()):
                    ti_pos = s.pos
                    ti = s.u32()
                    if ti >= len(types):
                        raise OutOfBoundsIndex(f"type index {ti} out of bounds", ti_pos)
                    func_type_indices.append(ti)
                    m.functions.append(Function(types[ti], [], []))
            elif sec_id == 4:
                for _ in range(s.u32()):
                    if m.table is not None:
                        raise DecodeError("multiple tables not supported (MVP)", s.pos)
                    if s.byte() != 0x70:
                        raise DecodeError("table element type must be funcref", s.pos - 1)
                    m.table = Table(s.limits())
            elif sec_id == 5:
                for _ in range(s.u32()):
                    if m.memory is not None:
                        raise DecodeError("multiple memories not supported (MVP)", s.pos)
                    lim_pos = s.pos
                    lim = s.limits()
                    _check_memory_limits(lim, lim_pos)
                    m.memory = Memory(lim)
            elif sec_id == 6:
                for _ in range(s.u32()):
                    gt_pos = s.pos
                    gt = s.valtype()
                    mut = s.byte()
                    if mut not in (0, 1):
                        raise DecodeError("invalid mutability flag", s.pos - 1)
                    expr = _decode_expr(s, types)
                    _check_const_expr(expr, m.globals, gt, gt_pos)
                    m.globals.append(Global(gt, bool(mut), expr))
            elif sec_id == 7:
                seen = set()
                counts = {
                    "func": len(m.functions),
                    "table": 1 if m.table else 0,
                    "memory": 1 if m.memory else 0,
                    "global": len(m.globals),
                }
                for _ in range(s.u32()):
                    name = s.name()
                    kind_pos = s.pos
                    kind = s.byte()
                    if kind > 3:
                        raise DecodeError(f"unknown export kind {kind}", kind_pos)
                    idx = s.u32()
                    kind_name = EXPORT_KINDS[kind]
                    if name in seen:
                        raise DecodeError(f"duplicate export name {name!r}", kind_pos)
                    seen.add(name)
                    if idx >= counts[kind_name]:
                        raise OutOfBoundsIndex(
                            f"export {kind_name} index {idx} out of bounds", kind_pos)
                    m.exports.append(Export(name, kind_name, idx))
            elif sec_id == 8:
                idx_pos = s.pos
                idx = s.u32()
                if idx >= len(m.functions):
                    raise OutOfBoundsIndex(f"start function {idx} out of bounds", idx_pos)
                if m.functions[idx].type != FuncType((), ()):
                    raise DecodeError("start function must have type [] -> []", idx_pos)
                m.start = idx
            elif sec_id == 9:
                for _ in range(s.u32()):
                    seg_pos = s.pos
                    if s.u32() != 0:
                        raise DecodeError("element table index must be 0 (MVP)", seg_pos)
                    if m.table is None:
                        raise DecodeError("element segment without table", seg_pos)
                    expr = _decode_expr(s, types)
                    _check_const_expr(expr, m.globals, I32, seg_pos)
                    funcs = []
                    for _ in range(s.u32()):
                        fi_pos = s.pos
                        fi = s.u32()
                        if fi >= len(m.functions):
                            raise OutOfBoundsIndex(f"element function {fi} out of bounds", fi_pos)
                        funcs.append(fi)
                    m.table.segments.append(ElemSegment(expr, funcs))
            elif sec_id == 10:
                bodies_seen = True
                count = s.u32()
                defined = [fn for fn in m.functions if not fn.imported]
                if count != len(defined):
                    raise DecodeError(
                        f"code section has {count} bodies for {len(defined)} functions", sec_pos)
                for fn in defined:
                    body_size = s.u32()
                    body_end = s.pos + body_size
                    if body_end > s.end:
                        raise TruncatedSection("function body overruns section", s.pos)
                    b = _Reader(data, s.pos, body_end)
                    local_decls = []
                    for _ in range(b.u32()):
                        n = b.u32()
                        t = b.valtype()
                        if len(local_decls) + n > 50_000:
                            raise DecodeError("too many locals (limit 50000)", b.pos)
                        local_decls.extend([t] * n)
                    fn.locals = local_decls
                    fn.body = _decode_expr(b, types)
                    if b.pos != body_end:
                        raise DecodeError("function body size mismatch", b.pos)
                    s.pos = body_end
            elif sec_id == 11:
                for _ in range(s.u32()):
                    seg_pos = s.pos
                    if s.u32() != 0:
                        raise DecodeError("data memory index must be 0 (MVP)", seg_pos)
                    if m.memory is None:
                        raise DecodeError("data segment without memory", seg_pos)
                    expr = _decode_expr(s, types)
                    _check_const_expr(expr, m.globals, I32, seg_pos)
                    m.memory.segments.append(DataSegment(expr, s.bytes(s.u32())))
        else:
            raise DecodeError(f"unknown section id {sec_id}", sec_pos)

        if s.pos != payload_end:
            raise TruncatedSection(f"section {sec_id} size mismatch", s.pos)
        r.pos = payload_end

    if any(not fn.imported for fn in m.functions) and not bodies_seen:
        raise DecodeError("missing code section", len(data))
    _check_code_indices(m)
    m.customs = customs
    return m


def _check_memory_limits(lim: Limits, pos: int) -> None:
    if lim.minimum > MAX_MEMORY_PAGES or (lim.maximum or 0) > MAX_MEMORY_PAGES:
        raise DecodeError("memory limits exceed 65536 pages", pos)


def _check_code_indices(m: Module) -> None:
    """Bounds-check body-level index immediates (labels are typing's job)."""
    seen_defined = False
    for i, fn in enumerate(m.functions):
        if fn.imported:
            if seen_defined:
                raise DecodeError("imported function after defined function", None)
            continue
        seen_defined = True
        nlocals = len(fn.type.params) + len(fn.locals)
        for ins in fn.body:
            cat = OPS[ins.op].category
            if cat == "call" and ins.index >= len(m.functions):
                raise OutOfBoundsIndex(f"call target {ins.index} out of bounds in function {i}", None)
            if cat == "local" and ins.index >= nlocals:
                raise OutOfBoundsIndex(f"local index {ins.index} out of bounds in function {i}", None)
            if cat == "global" and ins.index >= len(m.globals):
                raise OutOfBoundsIndex(f"global index {ins.index} out of bounds in function {i}", None)
    seen_defined_g = False
    for g in m.globals:
        if g.imported and seen_defined_g:
            raise DecodeError("imported global after defined global", None)
        if not g.imported:
            seen_defined_g = True


class _Writer:
    def __init__(self):
        self.out = bytearray()

    def byte(self, b: int):
        self.out.append(b)

    def raw(self, data: bytes):
        self.out.extend(data)

    def u32(self, value: int):
        self.out.extend(leb128.encode_unsigned(value))

    def s32(self, value: int):
        self.out.extend(leb128.encode_signed(value))

    def s64(self, value: int):
        self.out.extend(leb128.encode_signed(value))

    def name(self, text: str):
        raw = text.encode("utf-8")
        self.u32(len(raw))
        self.raw(raw)

    def valtype(self, t):
        self.byte(VALTYPE_CODES[t])

    def limits(self, lim: Limits):
        if lim.maximum is None:
            self.byte(0)
            self.u32(lim.minimum)
        else:
            self.byte(1)
            self.u32(lim.minimum)
            self.u32(lim.maximum)


def encode_instruction(w: _Writer, ins: Instr, type_index: dict[FuncType, int]) -> None:
    info = OPS.get(ins.op)
    if info is None:
        raise EncodeError(f"unknown mnemonic {ins.op!r}")
    w.byte(info.code)
    cat = info.category
    if cat in ("block", "loop", "if"):
        w.byte(0x40 if ins.block_type is None else VALTYPE_CODES[ins.block_type])
    elif cat in ("br", "br_if", "call"):
        w.u32(ins.index)
    elif cat == "br_table":
        w.u32(len(ins.labels))
        for label in ins.labels:
            w.u32(label)
        w.u32(ins.default_label)
    elif cat == "call_indirect":
        w.u32(type_index[ins.func_type])
        w.byte(0)
    elif cat in ("local", "global"):
        w.u32(ins.index)
    elif cat in ("load", "store"):
        w.u32(ins.align)
        w.u32(ins.offset)
    elif cat in ("memory_size", "memory_grow"):
        w.byte(0)
    elif cat == "const":
        if ins.op == "i32.const":
            w.s32(ins.value)
        elif ins.op == "i64.const":
            w.s64(ins.value)
        elif ins.op == "f32.const":
            w.raw(struct.pack("<I", ins.value & 0xFFFFFFFF))
        else:
            w.raw(struct.pack("<Q", ins.value & 0xFFFFFFFFFFFFFFFF))


def _collect_types(m: Module) -> tuple[list[FuncType], dict[FuncType, int]]:
    types: list[FuncType] = []
    index: dict[FuncType, int] = {}

    def add(ft: FuncType):
        if ft not in index:
            if len(ft.results) > 1:
                raise EncodeError(f"function type {ft} has more than one result")
            index[ft] = len(types)
            types.append(ft)

    for fn in m.functions:
        add(fn.type)
    for fn in m.functions:
        for ins in fn.body or ():
            if OPS[ins.op].category == "call_indirect":
                add(ins.func_type)
    return types, index


def _section(w: _Writer, sec_id: int, payload: bytearray) -> None:
    w.byte(sec_id)
    w.u32(len(payload))
    w.raw(payload)


def encode_module(m: Module) -> bytes:
    types, type_index = _collect_types(m)
    w = _Writer()
    w.raw(MAGIC)
    w.raw(VERSION)

    customs_by_pos: dict[int, list[CustomSection]] = {}
    for cs in m.customs:
        customs_by_pos.setdefault(cs.after_section, []).append(cs)

    def emit_customs(after: int):
        for cs in customs_by_pos.get(after, ()):
            p = _Writer()
            p.name(cs.name)
            p.raw(cs.data)
            _section(w, 0, p.out)

    emit_customs(0)

    def emit(sec_id: int, build) -> None:
        p = _Writer()
        if build(p):
            _section(w, sec_id, p.out)
        emit_customs(sec_id)

    def build_types(p: _Writer):
        if not types:
            return False
        p.u32(len(types))
        for ft in types:
            p.byte(0x60)
            p.u32(len(ft.params))
            for t in ft.params:
                p.valtype(t)
            p.u32(len(ft.results))
            for t in ft.results:
                p.valtype(t)
        return True

    def build_imports(p: _Writer):
        entries = []
        for fn in m.functions:
            if fn.imported:
                entries.append(("func", fn))
        if m.table is not None and m.table.import_name:
            entries.append(("table", m.table))
        if m.memory is not None and m.memory.import_name:
            entries.append(("memory", m.memory))
        for g in m.globals:
            if g.imported:
                entries.append(("global", g))
        if not entries:
            return False
        p.u32(len(entries))
        for kind, item in entries:
            p.name(item.import_name[0])
            p.name(item.import_name[1])
            if kind == "func":
                p.byte(0)
                p.u32(type_index[item.type])
            elif kind == "table":
                p.byte(1)
                p.byte(0x70)
                p.limits(item.limits)
            elif kind == "memory":
                p.byte(2)
                p.limits(item.limits)
            else:
                p.byte(3)
                p.valtype(item.type)
                p.byte(1 if item.mutable else 0)
        return True

    def build_functions(p: _Writer):
        defined = [fn for fn in m.functions if not fn.imported]
        if not defined:
            return False
        p.u32(len(defined))
        for fn in defined:
            p.u32(type_index[fn.type])
        return True

    def build_table(p: _Writer):
        if m.table is None or m.table.import_name:
            return False
        p.u32(1)
        p.byte(0x70)
        p.limits(m.table.limits)
        return True

    def build_memory(p: _Writer):
        if m.memory is None or m.memory.import_name:
            return False
        p.u32(1)
        p.limits(m.memory.limits)
        return True

    def build_globals(p: _Writer):
        defined = [g for g in m.globals if not g.imported]
        if not defined:
            return False
        p.u32(len(defined))
        for g in defined:
            p.valtype(g.type)
            p.byte(1 if g.mutable else 0)
            for ins in g.init:
                encode_instruction(p, ins, type_index)
        return True

    def build_exports(p: _Writer):
        if not m.exports:
            return False
        p.u32(len(m.exports))
        for e in m.exports:
            p.name(e.name)
            p.byte(EXPORT_KINDS.index(e.kind))
            p.u32(e.index)
        return True

    def build_start(p: _Writer):
        if m.start is None:
            return False
        p.u32(m.start)
        return True

    def build_elements(p: _Writer):
        if m.table is None or not m.table.segments:
            return False
        p.u32(len(m.table.segments))
        for seg in m.table.segments:
            p.u32(0)
            for ins in seg.offset:
                encode_instruction(p, ins, type_index)
            p.u32(len(seg.funcs))
            for fi in seg.funcs:
                p.u32(fi)
        return True

    def build_code(p: _Writer):
        defined = [fn for fn in m.functions if not fn.imported]
        if not defined:
            return False
        p.u32(len(defined))
        for fn in defined:
            b = _Writer()
            runs = []
            for t in fn.locals:
                if runs and runs[-1][1] is t:
                    runs[-1][0] += 1
                else:
                    runs.append([1, t])
            b.u32(len(runs))
            for count, t in runs:
                b.u32(count)
                b.valtype(t)
            for ins in fn.body:
                encode_instruction(b, ins, type_index)
            p.u32(len(b.out))
            p.raw(b.out)
        return True

    def build_data(p: _Writer):
        if m.memory is None or not m.memory.segments:
            return False
        p.u32(len(m.memory.segments))
        for seg in m.memory.segments:
            p.u32(0)
            for ins in seg.offset:
                encode_instruction(p, ins, type_index)
            p.u32(len(seg.data))
            p.raw(seg.data)
        return True

    emit(1, build_types)
    emit(2, build_imports)
    emit(3, build_functions)
    emit(4, build_table)
    emit(5, build_memory)
    emit(6, build_globals)
    emit(7, build_exports)
    emit(8, build_start)
    emit(9, build_elements)
    emit(10, build_code)
    emit(11, build_data)

    return bytes(w.out)
