"""wasm-probe: ahead-of-time WebAssembly binary instrumentation with a
high-level dynamic-analysis hook API."""

from .codec import decode_module, encode_module
from .controlflow import (BranchTarget, ControlFrame, control_stack_update,
                          ended_blocks_for_return, match_ends, resolve_label)
from .errors import (DecodeError, EncodeError, InstrumentError, ValidationError,
                     WasmProbeError)
from .glue import emit_glue
from .hooks import ALL_HOOKS, HookKind, HookRef, HookRegistry
from .instrument import (ModuleMetadata, TempLocalPool, instrument_module,
                         lower_i64, present_hook_kinds, remap_indices)
from .ir import (F32, F64, FuncType, Function, Global, I32, I64, Instr,
                 Location, Memory, Module, Table, ValType)
from .typecheck import (AbstractStack, InstrTypeAnnotation, check_function,
                        resolve_polymorphic, validate_module)

__version__ = "0.1.0"

__all__ = [
    "ALL_HOOKS", "AbstractStack", "BranchTarget", "ControlFrame",
    "DecodeError", "EncodeError", "F32", "F64", "FuncType", "Function",
    "Global", "HookKind", "HookRef", "HookRegistry", "I32", "I64", "Instr",
    "InstrTypeAnnotation", "InstrumentError", "Location", "Memory", "Module",
    "ModuleMetadata", "Table", "TempLocalPool", "ValType", "ValidationError",
    "WasmProbeError", "check_function", "control_stack_update",
    "decode_module", "emit_glue", "encode_module", "ended_blocks_for_return",
    "instrument_module", "lower_i64", "match_ends", "present_hook_kinds",
    "remap_indices", "resolve_label", "resolve_polymorphic", "validate_module",
]
