"""In-memory representation of a WebAssembly 1.0 module.

Values are immutable after decoding; instruction bodies are plain lists of
frozen `Instr` records. Float const immediates are kept as raw bit patterns
so NaN payloads survive a decode/encode round trip.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field


class ValType(enum.Enum):
    I32 = "i32"
    I64 = "i64"
    F32 = "f32"
    F64 = "f64"

    def __repr__(self):
        return self.value


I32 = ValType.I32
I64 = ValType.I64
F32 = ValType.F32
F64 = ValType.F64


@dataclass(frozen=True, slots=True)
class FuncType:
    params: tuple[ValType, ...]
    results: tuple[ValType, ...]

    def __repr__(self):
        return f"[{', '.join(p.value for p in self.params)}] -> [{', '.join(r.value for r in self.results)}]"


@dataclass(frozen=True, slots=True, order=True)
class Location:
    """(function index, instruction index) in the *original* module.

    instr == -1 denotes the implicit function entry.
    """

    func: int
    instr: int


@dataclass(frozen=True, slots=True)
class Instr:
    """One instruction: canonical mnemonic plus opcode-specific immediates."""

    op: str
    value: int | None = None            # const immediate (raw bits for floats)
    index: int | None = None            # local/global/func index or branch label
    labels: tuple[int, ...] | None = None   # br_table targets
    default_label: int | None = None    # br_table default
    align: int | None = None            # memarg alignment exponent
    offset: int | None = None           # memarg static offset
    func_type: FuncType | None = None   # call_indirect signature
    block_type: ValType | None = None   # block/loop/if result, None = empty
    hook_key: tuple | None = None       # symbolic hook-call target, pre-remap

    def __repr__(self):
        parts = [self.op]
        for name in ("value", "index", "labels", "default_label", "offset"):
            v = getattr(self, name)
            if v is not None:
                parts.append(f"{name}={v}")
        return f"({' '.join(str(p) for p in parts)})"


def f32_bits(value: float) -> int:
    return struct.unpack("<I", struct.pack("<f", value))[0]


def f64_bits(value: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", value))[0]


def bits_to_f32(bits: int) -> float:
    return struct.unpack("<f", struct.pack("<I", bits & 0xFFFFFFFF))[0]


def bits_to_f64(bits: int) -> float:
    return struct.unpack("<d", struct.pack("<Q", bits & 0xFFFFFFFFFFFFFFFF))[0]


@dataclass(frozen=True, slots=True)
class Limits:
    minimum: int
    maximum: int | None = None


@dataclass(slots=True)
class Function:
    type: FuncType
    locals: list[ValType] = field(default_factory=list)
    body: list[Instr] = field(default_factory=list)
    import_name: tuple[str, str] | None = None

    @property
    def imported(self) -> bool:
        return self.import_name is not None

    def __eq__(self, other):
        if not isinstance(other, Function):
            return NotImplemented
        return (self.type, self.locals, self.body, self.import_name) == (
            other.type, other.locals, other.body, other.import_name)


@dataclass(slots=True, eq=True)
class Global:
    type: ValType
    mutable: bool
    init: list[Instr] | None = None
    import_name: tuple[str, str] | None = None

    @property
    def imported(self) -> bool:
        return self.import_name is not None


@dataclass(slots=True, eq=True)
class ElemSegment:
    offset: list[Instr]
    funcs: list[int]


@dataclass(slots=True, eq=True)
class Table:
    limits: Limits
    import_name: tuple[str, str] | None = None
    segments: list[ElemSegment] = field(default_factory=list)


@dataclass(slots=True, eq=True)
class DataSegment:
    offset: list[Instr]
    data: bytes


@dataclass(slots=True, eq=True)
class Memory:
    limits: Limits
    import_name: tuple[str, str] | None = None
    segments: list[DataSegment] = field(default_factory=list)


EXPORT_KINDS = ("func", "table", "memory", "global")


@dataclass(frozen=True, slots=True)
class Export:
    name: str
    kind: str
    index: int


@dataclass(frozen=True, slots=True)
class CustomSection:
    after_section: int     # id of the last non-custom section seen before it
    name: str
    data: bytes


@dataclass(slots=True, eq=True)
class Module:
    functions: list[Function] = field(default_factory=list)
    globals: list[Global] = field(default_factory=list)
    table: Table | None = None
    memory: Memory | None = None
    start: int | None = None
    exports: list[Export] = field(default_factory=list)
    customs: list[CustomSection] = field(default_factory=list)

    def defined_functions(self):
        """Yield (index, function) for locally-defined functions."""
        for i, fn in enumerate(self.functions):
            if not fn.imported:
                yield i, fn

    def num_imported_functions(self) -> int:
        return sum(1 for fn in self.functions if fn.imported)
