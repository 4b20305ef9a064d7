"""The rewriting pass: interleave hook calls with the original instructions.

Each function is walked with its type annotations and an abstract control
stack. Behavior per instruction kind:

  const            duplicate the produced value for the hook
  unary/binary/    capture inputs and result in temp locals, pass both
  load/store
  call/call_ind.   capture args, call_pre before, call_post on the result
  drop/select      the hook consumes the value(s); select re-executes on
                   restored operands
  branches         branch hook first, then explicit end-hook calls for every
                   frame the jump exits (conditional ones guarded by an
                   inserted `if` so they only fire when taken)
  br_table         hook receives a dense table id; the runtime fires the end
                   callbacks using the side table in the metadata
  blocks           begin hook right inside the block, end hook before `end`

Every hook call is prefixed with two i32 consts carrying the original
(func, instr) location; i64 values are split into two i32 halves. Statically
dead code is copied through untouched - its hooks could never fire.

Functions may be instrumented in parallel; the hook registry is the only
shared state. Hook import indices and br_table ids are assigned by a
canonical sequential replay so output bytes do not depend on scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .controlflow import (ControlFrame, control_stack_update,
                          ended_blocks_for_return, initial_stack, match_ends,
                          resolve_label)
from .errors import InstrumentError
from .hooks import HookKind, HookRegistry
from .ir import (ElemSegment, Export, FuncType, Function, I32, I64, Instr,
                 Location, Module, Table, ValType)
from .opcodes import CONST_OP, OPS
from .typecheck import InstrTypeAnnotation, check_function

HookSet = frozenset
ALL = frozenset(HookKind)

TABLE_EXPORT = "__wasabi_table"
MEMORY_EXPORT = "__wasabi_memory"

DEFAULT_MAX_FUNCTION_SIZE = 100_000


@dataclass(slots=True)
class ModuleMetadata:
    function_types: list[FuncType]
    hook_import_count: int
    br_tables: list[dict]
    exports: dict[str, dict]
    table_export_name: str | None
    memory_export_name: str | None
    table_map: dict[int, int]

    def index_map(self) -> list[int]:
        h = self.hook_import_count
        return [i + h for i in range(len(self.function_types))]

    def to_json_dict(self) -> dict:
        return {
            "functionTypes": [
                {"params": [p.value for p in ft.params],
                 "results": [r.value for r in ft.results]}
                for ft in self.function_types
            ],
            "hookImportCount": self.hook_import_count,
            "indexMap": self.index_map(),
            "brTables": self.br_tables,
            "exports": self.exports,
            "tableExportName": self.table_export_name,
            "memoryExportName": self.memory_export_name,
            "table": {str(k): v for k, v in sorted(self.table_map.items())},
        }


class TempLocalPool:
    """Per-function scratch locals, appended after the declared locals and
    reused across instrumentation sites (never across one site)."""

    def __init__(self, base: int):
        self.base = base
        self.types: list[ValType] = []
        self._free: dict[ValType, list[int]] = {}
        self._site: list[tuple[ValType, int]] = []

    def new_site(self):
        for t, idx in self._site:
            self._free[t].append(idx)
        self._site.clear()

    def alloc(self, t: ValType) -> int:
        free = self._free.setdefault(t, [])
        if free:
            idx = free.pop()
        else:
            idx = self.base + len(self.types)
            self.types.append(t)
        self._site.append((t, idx))
        return idx


def lower_i64(reload: list[Instr]) -> list[Instr]:
    """Push (low, high) i32 halves of the i64 value that `reload` pushes."""
    return (list(reload) + [Instr("i32.wrap/i64")]
            + list(reload) + [Instr("i64.const", value=32),
                              Instr("i64.shr_s"), Instr("i32.wrap/i64")])


def _push_value(reload: list[Instr], t: ValType) -> list[Instr]:
    return lower_i64(reload) if t is I64 else list(reload)


def _get(idx: int) -> Instr:
    return Instr("get_local", index=idx)


@dataclass(slots=True)
class _FuncResult:
    body: list[Instr]
    extra_locals: list[ValType]
    positions: dict[int, int] = field(default_factory=dict)
    br_entries: dict[int, dict] = field(default_factory=dict)


def _frame_dict(frame: ControlFrame) -> list:
    return [frame.block_type, frame.begin.instr, frame.end.instr]


def _instrument_function(module: Module, fidx: int, func: Function,
                         ann: list[InstrTypeAnnotation], hooks: frozenset,
                         registry: HookRegistry,
                         br_ids: dict[tuple[int, int], int]) -> _FuncResult:
    body = func.body
    pool = TempLocalPool(len(func.type.params) + len(func.locals))
    out: list[Instr] = []
    positions: dict[int, int] = {}
    br_entries: dict[int, dict] = {}
    stack = initial_stack(fidx, len(body))
    ends = match_ends(body)

    def loc_consts(instr_idx: int) -> list[Instr]:
        return [Instr("i32.const", value=fidx), Instr("i32.const", value=instr_idx)]

    def hook_call(kind: HookKind, op: str | None,
                  params: tuple[ValType, ...]) -> Instr:
        ref = registry.get_or_create(kind, op, params)
        return Instr("call", hook_key=ref.key)

    def end_hook_call(frame: ControlFrame) -> list[Instr]:
        return loc_consts(frame.end.instr) + [
            Instr("i32.const", value=frame.begin.instr),
            hook_call(HookKind.END, frame.block_type, (I32,)),
        ]

    def capture_args(params: tuple[ValType, ...]):
        """Spill call arguments, leaving the stack as it was.

        Returns (spill+restore instrs, temp local indices in arg order)."""
        if not params:
            return [], []
        temps = [pool.alloc(t) for t in params]
        seq = [Instr("set_local", index=temps[i])
               for i in range(len(params) - 1, 0, -1)]
        seq.append(Instr("tee_local", index=temps[0]))
        seq.extend(_get(temps[i]) for i in range(1, len(params)))
        return seq, temps

    # implicit function entry: start hook, then the function begin hook
    if HookKind.START in hooks and module.start == fidx:
        out += loc_consts(-1) + [hook_call(HookKind.START, None, ())]
    if HookKind.BEGIN in hooks:
        out += loc_consts(-1) + [hook_call(HookKind.BEGIN, "function", ())]

    for idx, ins in enumerate(body):
        pool.new_site()
        op = ins.op
        info = OPS[op]
        cat = info.category
        live = ann[idx].reachable

        if not live and cat not in ("else", "end"):
            positions[idx] = len(out)
            out.append(ins)
            stack = control_stack_update(stack, ins, Location(fidx, idx), ends)
            continue

        if cat == "const" and HookKind.CONST in hooks:
            t = info.outs[0]
            positions[idx] = len(out)
            out.append(ins)
            out += loc_consts(idx)
            out += _push_value([ins], t)
            out.append(hook_call(HookKind.CONST, op, (t,)))

        elif cat == "unary" and HookKind.UNARY in hooks:
            (tin,), (tout,) = info.ins, info.outs
            t_in, t_out = pool.alloc(tin), pool.alloc(tout)
            out.append(Instr("tee_local", index=t_in))
            positions[idx] = len(out)
            out.append(ins)
            out.append(Instr("tee_local", index=t_out))
            out += loc_consts(idx)
            out += _push_value([_get(t_in)], tin)
            out += _push_value([_get(t_out)], tout)
            out.append(hook_call(HookKind.UNARY, op, (tin, tout)))

        elif cat == "binary" and HookKind.BINARY in hooks:
            (ta, tb), (tr,) = info.ins, info.outs
            t_a, t_b, t_r = pool.alloc(ta), pool.alloc(tb), pool.alloc(tr)
            out += [Instr("set_local", index=t_b), Instr("tee_local", index=t_a),
                    _get(t_b)]
            positions[idx] = len(out)
            out.append(ins)
            out.append(Instr("tee_local", index=t_r))
            out += loc_consts(idx)
            out += _push_value([_get(t_a)], ta)
            out += _push_value([_get(t_b)], tb)
            out += _push_value([_get(t_r)], tr)
            out.append(hook_call(HookKind.BINARY, op, (ta, tb, tr)))

        elif cat == "load" and HookKind.LOAD in hooks:
            t = info.outs[0]
            t_addr, t_v = pool.alloc(I32), pool.alloc(t)
            out.append(Instr("tee_local", index=t_addr))
            positions[idx] = len(out)
            out.append(ins)
            out.append(Instr("tee_local", index=t_v))
            out += loc_consts(idx)
            out += [_get(t_addr), Instr("i32.const", value=ins.offset)]
            out += _push_value([_get(t_v)], t)
            out.append(hook_call(HookKind.LOAD, op, (I32, I32, t)))

        elif cat == "store" and HookKind.STORE in hooks:
            t = info.ins[1]
            t_v, t_addr = pool.alloc(t), pool.alloc(I32)
            out += [Instr("set_local", index=t_v), Instr("tee_local", index=t_addr),
                    _get(t_v)]
            positions[idx] = len(out)
            out.append(ins)
            out += loc_consts(idx)
            out += [_get(t_addr), Instr("i32.const", value=ins.offset)]
            out += _push_value([_get(t_v)], t)
            out.append(hook_call(HookKind.STORE, op, (I32, I32, t)))

        elif cat == "memory_size" and HookKind.MEMORY_SIZE in hooks:
            positions[idx] = len(out)
            out.append(ins)
            out += loc_consts(idx)
            out.append(Instr("memory.size"))
            out.append(hook_call(HookKind.MEMORY_SIZE, None, (I32,)))

        elif cat == "memory_grow" and HookKind.MEMORY_GROW in hooks:
            t_d, t_p = pool.alloc(I32), pool.alloc(I32)
            out.append(Instr("tee_local", index=t_d))
            positions[idx] = len(out)
            out.append(ins)
            out.append(Instr("tee_local", index=t_p))
            out += loc_consts(idx)
            out += [_get(t_d), _get(t_p)]
            out.append(hook_call(HookKind.MEMORY_GROW, None, (I32, I32)))

        elif cat == "drop" and HookKind.DROP in hooks:
            t = ann[idx].inputs[0]
            tmp = pool.alloc(t)
            positions[idx] = len(out)      # set_local stands in for the drop
            out.append(Instr("set_local", index=tmp))
            out += loc_consts(idx)
            out += _push_value([_get(tmp)], t)
            out.append(hook_call(HookKind.DROP, None, (t,)))

        elif cat == "select" and HookKind.SELECT in hooks:
            t = ann[idx].inputs[0]
            t_c, t_2, t_1 = pool.alloc(I32), pool.alloc(t), pool.alloc(t)
            out += [Instr("set_local", index=t_c), Instr("set_local", index=t_2),
                    Instr("set_local", index=t_1)]
            out += loc_consts(idx)
            out.append(_get(t_c))
            out += _push_value([_get(t_1)], t)
            out += _push_value([_get(t_2)], t)
            out.append(hook_call(HookKind.SELECT, None, (I32, t, t)))
            out += [_get(t_1), _get(t_2), _get(t_c)]
            positions[idx] = len(out)
            out.append(ins)

        elif cat == "local" and HookKind.LOCAL in hooks:
            all_locals = tuple(func.type.params) + tuple(func.locals)
            t = all_locals[ins.index]
            positions[idx] = len(out)
            out.append(ins)
            out += loc_consts(idx)
            out.append(Instr("i32.const", value=ins.index))
            out += _push_value([_get(ins.index)], t)
            out.append(hook_call(HookKind.LOCAL, op, (I32, t)))

        elif cat == "global" and HookKind.GLOBAL in hooks:
            t = module.globals[ins.index].type
            positions[idx] = len(out)
            out.append(ins)
            out += loc_consts(idx)
            out.append(Instr("i32.const", value=ins.index))
            out += _push_value([Instr("get_global", index=ins.index)], t)
            out.append(hook_call(HookKind.GLOBAL, op, (I32, t)))

        elif cat in ("call", "call_indirect") and (
                HookKind.CALL_PRE in hooks or HookKind.CALL_POST in hooks):
            if cat == "call":
                ft = module.functions[ins.index].type
            else:
                ft = ins.func_type
            if HookKind.CALL_PRE in hooks:
                params = tuple(ft.params)
                if cat == "call":
                    spill, temps = capture_args(params)
                    out += spill
                    out += loc_consts(idx)
                    out += [Instr("i32.const", value=ins.index),
                            Instr("i32.const", value=-1)]
                else:
                    t_idx = pool.alloc(I32)
                    out.append(Instr("set_local", index=t_idx))
                    spill, temps = capture_args(params)
                    out += spill
                    out += loc_consts(idx)
                    out += [Instr("i32.const", value=-1), _get(t_idx)]
                for tmp, t in zip(temps, params):
                    out += _push_value([_get(tmp)], t)
                out.append(hook_call(HookKind.CALL_PRE, None, (I32, I32) + params))
                if cat == "call_indirect":
                    out.append(_get(t_idx))
            positions[idx] = len(out)
            out.append(ins)
            if HookKind.CALL_POST in hooks:
                results = tuple(ft.results)
                if results:
                    t_r = pool.alloc(results[0])
                    out.append(Instr("tee_local", index=t_r))
                    out += loc_consts(idx)
                    out += _push_value([_get(t_r)], results[0])
                else:
                    out += loc_consts(idx)
                out.append(hook_call(HookKind.CALL_POST, None, results))

        elif cat == "return" and (HookKind.RETURN in hooks or HookKind.END in hooks):
            results = tuple(func.type.results)
            if HookKind.RETURN in hooks:
                if results:
                    t_r = pool.alloc(results[0])
                    out.append(Instr("tee_local", index=t_r))
                    out += loc_consts(idx)
                    out += _push_value([_get(t_r)], results[0])
                else:
                    out += loc_consts(idx)
                out.append(hook_call(HookKind.RETURN, None, results))
            if HookKind.END in hooks:
                for frame in ended_blocks_for_return(stack):
                    out += end_hook_call(frame)
            positions[idx] = len(out)
            out.append(ins)

        elif cat == "br" and (HookKind.BR in hooks or HookKind.END in hooks):
            target = resolve_label(stack, ins.index)
            if HookKind.BR in hooks:
                out += loc_consts(idx)
                out += [Instr("i32.const", value=ins.index),
                        Instr("i32.const", value=target.location.instr)]
                out.append(hook_call(HookKind.BR, None, (I32, I32)))
            if HookKind.END in hooks:
                for frame in target.ended_blocks:
                    out += end_hook_call(frame)
            positions[idx] = len(out)
            out.append(ins)

        elif cat == "br_if" and (HookKind.BR_IF in hooks or HookKind.END in hooks):
            target = resolve_label(stack, ins.index)
            t_c = pool.alloc(I32)
            out.append(Instr("tee_local", index=t_c))
            if HookKind.BR_IF in hooks:
                out += loc_consts(idx)
                out += [Instr("i32.const", value=ins.index),
                        Instr("i32.const", value=target.location.instr), _get(t_c)]
                out.append(hook_call(HookKind.BR_IF, None, (I32, I32, I32)))
            if HookKind.END in hooks:
                # end hooks only fire when the branch is actually taken
                out += [_get(t_c), Instr("if")]
                for frame in target.ended_blocks:
                    out += end_hook_call(frame)
                out.append(Instr("end"))
            positions[idx] = len(out)
            out.append(ins)

        elif cat == "br_table" and (HookKind.BR_TABLE in hooks or HookKind.END in hooks):
            tid = br_ids[(fidx, idx)]
            targets = [resolve_label(stack, label) for label in ins.labels]
            default = resolve_label(stack, ins.default_label)
            br_entries[tid] = {
                "func": fidx,
                "instr": idx,
                "targets": [
                    {"label": t.label, "instr": t.location.instr,
                     "ended": [_frame_dict(fr) for fr in t.ended_blocks]}
                    for t in targets
                ],
                "default": {"label": default.label, "instr": default.location.instr,
                            "ended": [_frame_dict(fr) for fr in default.ended_blocks]},
            }
            t_i = pool.alloc(I32)
            out.append(Instr("tee_local", index=t_i))
            out += loc_consts(idx)
            out += [Instr("i32.const", value=tid), _get(t_i)]
            out.append(hook_call(HookKind.BR_TABLE, None, (I32, I32)))
            positions[idx] = len(out)
            out.append(ins)

        elif cat == "if" and (HookKind.IF in hooks or HookKind.BEGIN in hooks):
            if HookKind.IF in hooks:
                t_c = pool.alloc(I32)
                out.append(Instr("tee_local", index=t_c))
                out += loc_consts(idx)
                out.append(_get(t_c))
                out.append(hook_call(HookKind.IF, None, (I32,)))
            positions[idx] = len(out)
            out.append(ins)
            if HookKind.BEGIN in hooks:
                out += loc_consts(idx)
                out.append(hook_call(HookKind.BEGIN, "if", ()))

        elif cat in ("block", "loop") and HookKind.BEGIN in hooks:
            positions[idx] = len(out)
            out.append(ins)
            out += loc_consts(idx)
            out.append(hook_call(HookKind.BEGIN, cat, ()))

        elif cat == "else":
            frame = stack[-1]
            if HookKind.END in hooks and live:
                out += end_hook_call(frame)
            positions[idx] = len(out)
            out.append(ins)
            if HookKind.BEGIN in hooks and ann[frame.begin.instr].reachable:
                out += loc_consts(idx)
                out.append(hook_call(HookKind.BEGIN, "else", ()))

        elif cat == "end":
            frame = stack[-1]
            if HookKind.END in hooks and live:
                out += end_hook_call(frame)
            positions[idx] = len(out)
            out.append(ins)

        elif cat == "nop" and HookKind.NOP in hooks:
            out += loc_consts(idx)
            out.append(hook_call(HookKind.NOP, None, ()))
            positions[idx] = len(out)
            out.append(ins)

        elif cat == "unreachable" and HookKind.UNREACHABLE in hooks:
            out += loc_consts(idx)
            out.append(hook_call(HookKind.UNREACHABLE, None, ()))
            positions[idx] = len(out)
            out.append(ins)

        else:
            positions[idx] = len(out)
            out.append(ins)

        stack = control_stack_update(stack, ins, Location(fidx, idx), ends)

    return _FuncResult(out, pool.types, positions, br_entries)


def present_hook_kinds(module: Module) -> frozenset:
    """Hook kinds for which this module contains at least one instruction."""
    kinds = set()
    simple = {
        "const": HookKind.CONST, "unary": HookKind.UNARY, "binary": HookKind.BINARY,
        "load": HookKind.LOAD, "store": HookKind.STORE,
        "memory_size": HookKind.MEMORY_SIZE, "memory_grow": HookKind.MEMORY_GROW,
        "nop": HookKind.NOP, "unreachable": HookKind.UNREACHABLE,
        "drop": HookKind.DROP, "select": HookKind.SELECT,
        "local": HookKind.LOCAL, "global": HookKind.GLOBAL,
        "br": HookKind.BR, "br_if": HookKind.BR_IF, "br_table": HookKind.BR_TABLE,
        "if": HookKind.IF, "return": HookKind.RETURN,
    }
    for fidx, fn in module.defined_functions():
        kinds.update((HookKind.BEGIN, HookKind.END))   # the function frame
        for ins in fn.body:
            cat = OPS[ins.op].category
            if cat in simple:
                kinds.add(simple[cat])
            elif cat in ("call", "call_indirect"):
                kinds.update((HookKind.CALL_PRE, HookKind.CALL_POST))
    if module.start is not None and not module.functions[module.start].imported:
        kinds.add(HookKind.START)
    return frozenset(kinds)


def remap_indices(module: Module, hook_import_count: int,
                  hook_indices: dict[tuple, int] | None = None) -> Module:
    """Shift every original function index by the number of hook imports and
    resolve symbolic hook calls to final import indices."""
    h = hook_import_count
    hook_indices = hook_indices or {}

    def remap_instr(ins: Instr) -> Instr:
        if ins.op == "call":
            if ins.hook_key is not None:
                return Instr("call", index=hook_indices[ins.hook_key])
            return Instr("call", index=ins.index + h)
        return ins

    def remap_function(fn: Function) -> Function:
        if fn.imported:
            return Function(fn.type, [], [], fn.import_name)
        return Function(fn.type, list(fn.locals),
                        [remap_instr(i) for i in fn.body])

    table = module.table
    if table is not None:
        table = Table(table.limits, table.import_name,
                      [ElemSegment(list(seg.offset), [fi + h for fi in seg.funcs])
                       for seg in table.segments])
    return Module(
        functions=[remap_function(fn) for fn in module.functions],
        globals=list(module.globals),
        table=table,
        memory=module.memory,
        start=None if module.start is None else module.start + h,
        exports=[Export(e.name, e.kind, e.index + h if e.kind == "func" else e.index)
                 for e in module.exports],
        customs=list(module.customs),
    )


def instrument_module(module: Module, hooks, thread_count: int = 1,
                      max_function_size: int = DEFAULT_MAX_FUNCTION_SIZE
                      ) -> tuple[Module, ModuleMetadata, HookRegistry]:
    hooks = frozenset(hooks)
    annotations: dict[int, list[InstrTypeAnnotation]] = {}
    for fidx, fn in module.defined_functions():
        if len(fn.body) > max_function_size:
            raise InstrumentError(
                f"function {fidx} has {len(fn.body)} instructions "
                f"(limit {max_function_size})")
        annotations[fidx] = check_function(module, fidx)

    registry = HookRegistry()

    br_ids: dict[tuple[int, int], int] = {}
    if HookKind.BR_TABLE in hooks or HookKind.END in hooks:
        for fidx, fn in module.defined_functions():
            for idx, ins in enumerate(fn.body):
                if OPS[ins.op].category == "br_table" and annotations[fidx][idx].reachable:
                    br_ids[(fidx, idx)] = len(br_ids)

    def work(fidx: int) -> tuple[int, _FuncResult]:
        fn = module.functions[fidx]
        return fidx, _instrument_function(module, fidx, fn, annotations[fidx],
                                          hooks, registry, br_ids)

    indices = [fidx for fidx, _ in module.defined_functions()]
    if thread_count > 1 and len(indices) > 1:
        with ThreadPoolExecutor(max_workers=thread_count) as pool:
            results = dict(pool.map(work, indices))
    else:
        results = dict(work(i) for i in indices)

    # canonical replay: hook import indices by first use in function order
    key_order: list[tuple] = []
    seen: set[tuple] = set()
    for fidx in indices:
        for ins in results[fidx].body:
            if ins.hook_key is not None and ins.hook_key not in seen:
                seen.add(ins.hook_key)
                key_order.append(ins.hook_key)
    registry.finalize(key_order)
    hook_index = {key: i for i, key in enumerate(key_order)}
    h = len(registry)

    def staged_function(i: int, fn: Function) -> Function:
        if i not in results:
            return fn
        res = results[i]
        return Function(fn.type, list(fn.locals) + res.extra_locals, res.body)

    staged = Module(
        functions=[staged_function(i, fn) for i, fn in enumerate(module.functions)],
        globals=list(module.globals),
        table=module.table,
        memory=module.memory,
        start=module.start,
        exports=list(module.exports),
        customs=[cs for cs in module.customs if cs.name != "name"],
    )
    out = remap_indices(staged, h, hook_index)

    hook_imports = [
        Function(ref.func_type(), [], [], ("__wasabi_hooks", ref.symbol))
        for ref in registry.refs()
    ]
    out.functions = hook_imports + out.functions

    table_name = memory_name = None
    if module.table is not None:
        table_name = next((e.name for e in out.exports if e.kind == "table"), None)
    if module.memory is not None:
        memory_name = next((e.name for e in out.exports if e.kind == "memory"), None)
    if hooks:
        existing = {e.name for e in out.exports}
        if module.table is not None and table_name is None:
            if TABLE_EXPORT in existing:
                raise InstrumentError(f"export name {TABLE_EXPORT!r} already taken")
            out.exports.append(Export(TABLE_EXPORT, "table", 0))
            table_name = TABLE_EXPORT
        if module.memory is not None and memory_name is None:
            if MEMORY_EXPORT in existing:
                raise InstrumentError(f"export name {MEMORY_EXPORT!r} already taken")
            out.exports.append(Export(MEMORY_EXPORT, "memory", 0))
            memory_name = MEMORY_EXPORT

    all_entries: dict[int, dict] = {}
    for fidx in indices:
        all_entries.update(results[fidx].br_entries)
    br_tables = [all_entries[i] for i in range(len(all_entries))]

    table_map: dict[int, int] = {}
    if module.table is not None:
        for seg in module.table.segments:
            first = seg.offset[0]
            if first.op == "i32.const":
                for k, fi in enumerate(seg.funcs):
                    table_map[first.value + k] = fi

    metadata = ModuleMetadata(
        function_types=[fn.type for fn in module.functions],
        hook_import_count=h,
        br_tables=br_tables,
        exports={e.name: {"kind": e.kind, "index": e.index} for e in module.exports},
        table_export_name=table_name,
        memory_export_name=memory_name,
        table_map=table_map,
    )
    return out, metadata, registry
