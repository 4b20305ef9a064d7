"""Command-line front end.

    wasm-probe instrument <input.wasm> -o <dir> [--hooks <list>|all]
        [--infer-hooks <file>] [--threads N] [--report json]

Writes <name>.instrumented.wasm, <name>.wasabi.js-glue and optionally
report.json into the output directory. Exit codes: 0 ok, 1 decode/type/
encode failure, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .codec import decode_module, encode_module
from .errors import WasmProbeError
from .glue import emit_glue
from .hooks import ALL_HOOKS, HookKind
from .instrument import instrument_module, present_hook_kinds
from .opcodes import OPS

# accepted on the command line with or without the trailing underscore
_ALIASES = {"if": "if_", "const": "const_", "return": "return_"}
_BY_VALUE = {k.value: k for k in HookKind}


@dataclass
class CliConfig:
    input_path: Path
    output_dir: Path
    hooks: frozenset
    thread_count: int = 1
    report_format: str = "none"     # none | json


def parse_hook_names(spec: str) -> frozenset:
    """Comma-separated hook kind names -> HookSet. Raises ValueError."""
    if spec == "all":
        return ALL_HOOKS
    kinds = set()
    for raw in spec.split(","):
        name = raw.strip()
        if not name:
            continue
        name = _ALIASES.get(name, name)
        if name not in _BY_VALUE:
            raise ValueError(f"unknown hook name: {raw.strip()!r}")
        kinds.add(_BY_VALUE[name])
    return frozenset(kinds)


def infer_hooks(analysis_text: str) -> frozenset:
    """Conservative textual scan for hook names in an analysis script."""
    kinds = set()
    for kind in HookKind:
        bare = kind.value.rstrip("_")
        if re.search(rf"\b{re.escape(bare)}_?\b", analysis_text):
            kinds.add(kind)
    return frozenset(kinds)


def run(config: CliConfig) -> int:
    started = time.monotonic()
    try:
        data = config.input_path.read_bytes()
    except OSError as exc:
        print(f"error: cannot read {config.input_path}: {exc}", file=sys.stderr)
        return 1
    try:
        module = decode_module(data)
        instrumented, metadata, registry = instrument_module(
            module, config.hooks, thread_count=config.thread_count)
        out_bytes = encode_module(instrumented)
        glue_text = emit_glue(registry, metadata)
    except WasmProbeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    config.output_dir.mkdir(parents=True, exist_ok=True)
    stem = config.input_path.name
    if stem.endswith(".wasm"):
        stem = stem[:-5]
    wasm_path = config.output_dir / f"{stem}.instrumented.wasm"
    glue_path = config.output_dir / f"{stem}.wasabi.js-glue"
    wasm_path.write_bytes(out_bytes)
    glue_path.write_text(glue_text, encoding="utf-8")
    elapsed_ms = (time.monotonic() - started) * 1000.0

    if config.report_format == "json":
        kind_counts = {}
        for _, fn in module.defined_functions():
            for ins in fn.body:
                cat = OPS[ins.op].category
                kind_counts[cat] = kind_counts.get(cat, 0) + 1
        report = {
            "input": str(config.input_path),
            "outputWasm": str(wasm_path),
            "outputGlue": str(glue_path),
            "originalSize": len(data),
            "instrumentedSize": len(out_bytes),
            "sizeRatio": len(out_bytes) / len(data),
            "hookCount": len(registry),
            "hooks": sorted(k.value for k in config.hooks),
            "presentKinds": sorted(k.value for k in present_hook_kinds(module)),
            "instructionCounts": dict(sorted(kind_counts.items())),
            "wallTimeMs": elapsed_ms,
        }
        (config.output_dir / "report.json").write_text(
            json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="wasm-probe",
        description="Rewrite a WebAssembly binary so selected instructions "
                    "call into imported analysis hooks.")
    sub = parser.add_subparsers(dest="command", required=True)
    ins = sub.add_parser("instrument", help="instrument a .wasm binary")
    ins.add_argument("input", type=Path)
    ins.add_argument("-o", "--output", type=Path, required=True,
                     help="output directory")
    ins.add_argument("--hooks", default="all",
                     help="comma-separated hook kinds, or 'all' (default)")
    ins.add_argument("--infer-hooks", type=Path, default=None, metavar="FILE",
                     help="derive the hook set from an analysis script")
    ins.add_argument("--threads", type=int, default=1)
    ins.add_argument("--report", choices=("none", "json"), default="none")

    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        hooks = parse_hook_names(args.hooks)
    except ValueError as exc:
        parser.error(str(exc))
    if args.infer_hooks is not None:
        try:
            hooks = infer_hooks(args.infer_hooks.read_text(encoding="utf-8"))
        except OSError as exc:
            parser.error(f"cannot read {args.infer_hooks}: {exc}")

    config = CliConfig(
        input_path=args.input,
        output_dir=args.output,
        hooks=hooks,
        thread_count=args.threads,
        report_format=args.report,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
