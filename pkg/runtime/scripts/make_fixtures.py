#!/usr/bin/env python3
"""Generate the runtime test fixtures.

Writes source .wasm inputs (built with the repository's corpus assembler)
and instruments them through the wasm-probe CLI - the runtime consumes the
instrumenter only through that public interface. Layout:

    fixtures/src/<name>.wasm
    fixtures/out/<variant>/<name>.instrumented.wasm + .wasabi.js-glue + report.json
    fixtures/manifest.json      name -> default invocation plan
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

RUNTIME_DIR = Path(__file__).resolve().parent.parent
REPO_ROOT = RUNTIME_DIR.parent
sys.path.insert(0, str(REPO_ROOT / "tests"))

import corpus  # noqa: E402

FIXTURES = sorted(set(corpus.KERNELS) | {
    "branch_sites", "mix_kernel", "overhead_kernel", "taint_flow",
    "loop_sum", "call_chain", "if_else", "select_i64",
})

# (variant directory, module, --hooks argument)
VARIANTS = [(name, name, "all") for name in FIXTURES] + [
    ("overhead_kernel_call", "overhead_kernel", "call_pre,call_post"),
    ("overhead_kernel_none", "overhead_kernel", ""),
]


def instrument(src: Path, out_dir: Path, hooks: str) -> None:
    env = dict(os.environ)
    env["PYTHONPATH"] = str(REPO_ROOT / "src")
    subprocess.run(
        [sys.executable, "-m", "wasmprobe.cli", "instrument", str(src),
         "-o", str(out_dir), "--hooks", hooks, "--report", "json"],
        check=True, env=env)


def main() -> None:
    src_dir = RUNTIME_DIR / "fixtures" / "src"
    out_root = RUNTIME_DIR / "fixtures" / "out"
    src_dir.mkdir(parents=True, exist_ok=True)
    out_root.mkdir(parents=True, exist_ok=True)

    for name in FIXTURES:
        (src_dir / f"{name}.wasm").write_bytes(corpus.CORPUS[name])

    for variant, name, hooks in VARIANTS:
        instrument(src_dir / f"{name}.wasm", out_root / variant, hooks)

    manifest = {name: corpus.INVOCATIONS.get(name, []) for name in FIXTURES}
    (RUNTIME_DIR / "fixtures" / "manifest.json").write_text(
        json.dumps(manifest, indent=1) + "\n")
    print(f"wrote {len(FIXTURES)} fixtures, {len(VARIANTS)} instrumented variants")


if __name__ == "__main__":
    main()
