"""Abstract-stack type checker.

Annotates every instruction of a function body with its concrete input and
output value types, resolving polymorphic instructions (drop, select, call,
locals, globals) against the surrounding context. Follows the standard
validation algorithm: per-frame operand stacks, an unreachable flag after
unconditional branches, and bottom (None) types for unconstrained pops in
dead code.

`reachable` on an annotation means dynamically reachable: False both after an
unconditional branch and inside blocks opened in dead code. For `else` it
means "the then-arm falls through", for `end` "control falls through to this
end" - exactly the cases in which the instrumenter inserts end hooks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (BranchLabelOutOfRange, StackUnderflow, TypeMismatch,
                     UnbalancedEnd, ValidationError)
from .ir import Function, I32, Instr, Location, Module, ValType
from .opcodes import OPS


@dataclass(frozen=True, slots=True)
class InstrTypeAnnotation:
    location: Location
    inputs: tuple[ValType | None, ...]
    outputs: tuple[ValType | None, ...]
    reachable: bool


@dataclass(slots=True)
class _Frame:
    kind: str                      # function | block | loop | if | else
    results: tuple[ValType, ...]
    height: int
    unreachable: bool = False
    spawned_dead: bool = False     # opened while enclosing code was dead


class AbstractStack:
    """Operand stack with per-frame bottom-type semantics for dead code."""

    def __init__(self):
        self.vals: list[ValType] = []
        self.frames: list[_Frame] = []

    @property
    def top_frame(self) -> _Frame:
        return self.frames[-1]

    def push_frame(self, kind: str, results: tuple[ValType, ...]):
        dead = bool(self.frames) and (
            self.top_frame.unreachable or self.top_frame.spawned_dead)
        self.frames.append(_Frame(kind, results, len(self.vals), spawned_dead=dead))

    def live(self) -> bool:
        f = self.top_frame
        return not (f.unreachable or f.spawned_dead)

    def mark_unreachable(self):
        f = self.top_frame
        del self.vals[f.height:]
        f.unreachable = True

    def push(self, t: ValType):
        self.vals.append(t)

    def pop(self, expect: ValType | None, loc: Location) -> ValType | None:
        f = self.top_frame
        if len(self.vals) == f.height:
            if f.unreachable:
                return expect            # bottom, assumes the expected type
            raise StackUnderflow("operand stack underflow", loc)
        actual = self.vals.pop()
        if actual is None:               # bottom value (dead-code select)
            return expect
        if expect is not None and actual is not expect:
            raise TypeMismatch(f"expected {expect.value}, got {actual.value}",
                               loc, expect, actual)
        return actual

    def label_types(self, label: int, loc: Location) -> tuple[ValType, ...]:
        if label >= len(self.frames):
            raise BranchLabelOutOfRange(f"branch label {label} out of range", loc)
        frame = self.frames[-1 - label]
        return () if frame.kind == "loop" else frame.results


def resolve_polymorphic(instr: Instr, stack: AbstractStack, module: Module,
                        func: Function, loc: Location):
    """Concrete (inputs, outputs) for a context-dependent instruction."""
    op = instr.op
    cat = OPS[op].category
    if cat == "drop":
        t = stack.pop(None, loc)
        return (t,), ()
    if cat == "select":
        cond = stack.pop(I32, loc)
        b = stack.pop(None, loc)
        a = stack.pop(None, loc)
        if a is not None and b is not None and a is not b:
            raise TypeMismatch(
                f"select operands disagree: {a.value} vs {b.value}", loc, a, b)
        t = a or b
        stack.push(t)      # None stays a bottom value on the stack
        ann_t = t or I32   # annotation default in dead code, never observable
        return (ann_t, ann_t, cond if cond is not None else I32), (ann_t,)
    if cat == "local":
        all_locals = tuple(func.type.params) + tuple(func.locals)
        if instr.index >= len(all_locals):
            raise ValidationError(f"local index {instr.index} out of bounds", loc)
        t = all_locals[instr.index]
        if op == "get_local":
            stack.push(t)
            return (), (t,)
        if op == "set_local":
            stack.pop(t, loc)
            return (t,), ()
        stack.pop(t, loc)
        stack.push(t)
        return (t,), (t,)
    if cat == "global":
        if instr.index >= len(module.globals):
            raise ValidationError(f"global index {instr.index} out of bounds", loc)
        g = module.globals[instr.index]
        if op == "get_global":
            stack.push(g.type)
            return (), (g.type,)
        if not g.mutable:
            raise TypeMismatch(f"set_global on immutable global {instr.index}", loc)
        stack.pop(g.type, loc)
        return (g.type,), ()
    if cat in ("call", "call_indirect"):
        if cat == "call":
            if instr.index >= len(module.functions):
                raise ValidationError(f"call target {instr.index} out of bounds", loc)
            ft = module.functions[instr.index].type
            extra = ()
        else:
            ft = instr.func_type
            idx = stack.pop(I32, loc)
            extra = (idx if idx is not None else I32,)
        for p in reversed(ft.params):
            stack.pop(p, loc)
        for rt in ft.results:
            stack.push(rt)
        return tuple(ft.params) + extra, tuple(ft.results)
    if cat == "return":
        results = func.type.results
        for rt in reversed(results):
            stack.pop(rt, loc)
        return tuple(results), ()
    raise ValueError(f"{op} is not polymorphic")


def check_function(module: Module, func_index: int,
                   collect_stacks: list | None = None) -> list[InstrTypeAnnotation]:
    """`collect_stacks`, when given, receives a snapshot of the operand
    stack (a tuple of ValType/None) taken before each instruction."""
    func = module.functions[func_index]
    if func.imported:
        raise ValueError(f"function {func_index} is imported, has no body")
    if not func.body:
        raise ValidationError("empty function body", Location(func_index, 0))

    stack = AbstractStack()
    stack.push_frame("function", tuple(func.type.results))
    annotations: list[InstrTypeAnnotation] = []
    body = func.body

    def pop_results(results, loc):
        for rt in reversed(results):
            stack.pop(rt, loc)

    def check_frame_exit(frame: _Frame, loc: Location):
        pop_results(frame.results, loc)
        if len(stack.vals) != frame.height:
            raise TypeMismatch(
                f"{len(stack.vals) - frame.height} extra operand(s) at block end", loc)

    for idx, ins in enumerate(body):
        loc = Location(func_index, idx)
        if collect_stacks is not None:
            collect_stacks.append(tuple(stack.vals))
        if not stack.frames:
            raise UnbalancedEnd("instruction after the function's final end", loc)
        op = ins.op
        cat = OPS[op].category
        info = OPS[op]
        live = stack.live()
        inputs: tuple = ()
        outputs: tuple = ()

        if cat in ("const", "unary", "binary", "load", "store",
                   "memory_size", "memory_grow", "nop", "unreachable"):
            if cat in ("load", "store"):
                if module.memory is None:
                    raise ValidationError(f"{op} without a memory", loc)
                if (1 << ins.align) > info.width:
                    raise ValidationError(
                        f"{op} alignment 2**{ins.align} exceeds natural {info.width}", loc)
            if cat in ("memory_size", "memory_grow") and module.memory is None:
                raise ValidationError(f"{op} without a memory", loc)
            for t in reversed(info.ins):
                stack.pop(t, loc)
            for t in info.outs:
                stack.push(t)
            inputs, outputs = info.ins, info.outs
            if cat == "unreachable":
                stack.mark_unreachable()
        elif cat in ("drop", "select", "local", "global", "call",
                     "call_indirect", "return"):
            if cat == "call_indirect" and module.table is None:
                raise ValidationError("call_indirect without a table", loc)
            inputs, outputs = resolve_polymorphic(ins, stack, module, func, loc)
            if cat == "return":
                stack.mark_unreachable()
        elif cat in ("block", "loop"):
            results = () if ins.block_type is None else (ins.block_type,)
            stack.push_frame(cat, results)
        elif cat == "if":
            stack.pop(I32, loc)
            inputs = (I32,)
            results = () if ins.block_type is None else (ins.block_type,)
            stack.push_frame("if", results)
        elif cat == "else":
            frame = stack.top_frame
            if frame.kind != "if":
                raise UnbalancedEnd("else without matching if", loc)
            check_frame_exit(frame, loc)
            frame.kind = "else"
            frame.unreachable = False
        elif cat == "end":
            frame = stack.top_frame
            if frame.kind == "if" and frame.results:
                raise TypeMismatch("if with a result type requires an else", loc)
            check_frame_exit(frame, loc)
            stack.frames.pop()
            if not stack.frames:
                if idx != len(body) - 1:
                    raise UnbalancedEnd("function frame closed before final end", loc)
            else:
                for rt in frame.results:
                    stack.push(rt)
            outputs = frame.results
        elif cat == "br":
            tys = stack.label_types(ins.index, loc)
            pop_results(tys, loc)
            inputs = tys
            stack.mark_unreachable()
        elif cat == "br_if":
            tys = stack.label_types(ins.index, loc)
            stack.pop(I32, loc)
            pop_results(tys, loc)
            for t in tys:
                stack.push(t)
            inputs = tys + (I32,)
            outputs = tys
        elif cat == "br_table":
            default_tys = stack.label_types(ins.default_label, loc)
            for label in ins.labels:
                if stack.label_types(label, loc) != default_tys:
                    raise TypeMismatch(
                        f"br_table target {label} type disagrees with default", loc)
            stack.pop(I32, loc)
            pop_results(default_tys, loc)
            inputs = default_tys + (I32,)
            stack.mark_unreachable()
        else:
            raise ValueError(f"unhandled category {cat}")

        annotations.append(InstrTypeAnnotation(loc, tuple(inputs), tuple(outputs), live))

    if stack.frames:
        raise UnbalancedEnd(
            f"{len(stack.frames)} unclosed block(s) at end of body",
            Location(func_index, len(body) - 1))
    return annotations


def validate_module(module: Module) -> dict[int, list[InstrTypeAnnotation]]:
    """Type check every defined function; raises on the first error."""
    return {i: check_function(module, i) for i, _ in module.defined_functions()}
