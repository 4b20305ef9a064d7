"""On-demand monomorphization: the map from (hook kind, op/tag, concrete
value types) to imported low-level hook functions.

Every low-level hook has wasm type [i32 func, i32 instr] ++ lowered value
params -> [], where lowering expands each i64 into an (i32 low, i32 high)
pair. Monomorphic variants are created only when an instruction actually
needs them; looking up an existing key is idempotent.

The registry is the only state shared between concurrently instrumented
functions, guarded by a readers/writer lock with atomic check-then-insert.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass

from .ir import FuncType, I32, I64, ValType


class HookKind(enum.Enum):
    START = "start"
    NOP = "nop"
    UNREACHABLE = "unreachable"
    IF = "if_"
    BR = "br"
    BR_IF = "br_if"
    BR_TABLE = "br_table"
    BEGIN = "begin"
    END = "end"
    MEMORY_SIZE = "memory_size"
    MEMORY_GROW = "memory_grow"
    CONST = "const_"
    DROP = "drop"
    SELECT = "select"
    UNARY = "unary"
    BINARY = "binary"
    LOAD = "load"
    STORE = "store"
    LOCAL = "local"
    GLOBAL = "global"
    CALL_PRE = "call_pre"
    CALL_POST = "call_post"
    RETURN = "return_"

    def __repr__(self):
        return self.value


ALL_HOOKS = frozenset(HookKind)

# kinds whose low-level symbol is the op mnemonic itself
_OP_NAMED = {HookKind.CONST, HookKind.UNARY, HookKind.BINARY,
             HookKind.LOAD, HookKind.STORE}


def hook_symbol(kind: HookKind, op: str | None, params: tuple[ValType, ...]) -> str:
    if kind in _OP_NAMED:
        return op
    if kind in (HookKind.BEGIN, HookKind.END):
        return f"{kind.value}_{op}"
    if kind in (HookKind.LOCAL, HookKind.GLOBAL):
        return f"{op}_{params[1].value}"
    if kind == HookKind.DROP:
        return f"drop_{params[0].value}"
    if kind == HookKind.SELECT:
        return f"select_{params[1].value}"
    if kind == HookKind.CALL_PRE:
        return "_".join(["call_pre"] + [t.value for t in params[2:]])
    if kind == HookKind.CALL_POST:
        return "_".join(["call_post"] + [t.value for t in params])
    if kind == HookKind.RETURN:
        return "_".join(["return"] + [t.value for t in params])
    return kind.value


def lower_types(params: tuple[ValType, ...]) -> tuple[ValType, ...]:
    """i64 -> (i32, i32); everything else passes through."""
    out: list[ValType] = []
    for t in params:
        out.extend((I32, I32) if t is I64 else (t,))
    return tuple(out)


@dataclass(slots=True)
class HookRef:
    kind: HookKind
    op: str | None                     # mnemonic / block-type tag, if any
    params: tuple[ValType, ...]        # value params before i64 lowering
    symbol: str
    index: int | None = None           # final import index, set at remap

    @property
    def key(self) -> tuple:
        return (self.kind.value, self.op or "", self.params)

    def func_type(self) -> FuncType:
        return FuncType((I32, I32) + lower_types(self.params), ())


class _ReadWriteLock:
    """Many concurrent readers, one exclusive writer."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writing = False

    def acquire_read(self):
        with self._cond:
            while self._writing:
                self._cond.wait()
            self._readers += 1

    def release_read(self):
        with self._cond:
            self._readers -= 1
            if not self._readers:
                self._cond.notify_all()

    def acquire_write(self):
        with self._cond:
            while self._writing or self._readers:
                self._cond.wait()
            self._writing = True

    def release_write(self):
        with self._cond:
            self._writing = False
            self._cond.notify_all()


class HookRegistry:
    def __init__(self):
        self._refs: dict[tuple, HookRef] = {}
        self._lock = _ReadWriteLock()

    def get_or_create(self, kind: HookKind, op: str | None,
                      params: tuple[ValType, ...]) -> HookRef:
        key = (kind.value, op or "", params)
        self._lock.acquire_read()
        try:
            ref = self._refs.get(key)
        finally:
            self._lock.release_read()
        if ref is not None:
            return ref
        self._lock.acquire_write()
        try:
            ref = self._refs.get(key)
            if ref is None:
                ref = HookRef(kind, op, params, hook_symbol(kind, op, params))
                self._refs[key] = ref
            return ref
        finally:
            self._lock.release_write()

    def get(self, key: tuple) -> HookRef:
        return self._refs[key]

    def __len__(self) -> int:
        return len(self._refs)

    def refs(self) -> list[HookRef]:
        """Refs in final import-index order (after finalize)."""
        return sorted(self._refs.values(), key=lambda r: (r.index is None, r.index))

    def finalize(self, key_order: list[tuple]) -> None:
        """Assign import indices by first request in a canonical replay."""
        assert len(key_order) == len(self._refs)
        for i, key in enumerate(key_order):
            self._refs[key].index = i
