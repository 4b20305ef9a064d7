"""Acceptance suite. One test per criterion, each printing a pass/fail line
(also echoed in the pytest terminal summary)."""

from __future__ import annotations

import time

import pytest

import corpus as corpus_mod
import mutations
import nodetools
from conftest import record_criterion
from wasmprobe import (ALL_HOOKS, HookKind, Location, decode_module,
                       encode_module, instrument_module, present_hook_kinds,
                       resolve_label, validate_module)
from wasmprobe.controlflow import control_stack_update, initial_stack, match_ends
from wasmprobe.errors import WasmProbeError
from wasmprobe.ir import Instr

from test_instrument import code_section


def _criterion(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    record_criterion(line)
    assert ok, line


def test_round_trip_corpus(corpus):
    started = time.monotonic()
    assert len(corpus) >= 60
    identical = 0
    idempotent = 0
    for name, blob in corpus.items():
        m1 = decode_module(blob)
        once = encode_module(m1)
        m2 = decode_module(once)
        if m1 == m2:
            identical += 1
        if encode_module(m2) == once:
            idempotent += 1
    elapsed = time.monotonic() - started
    ok = (identical == len(corpus) and idempotent == len(corpus)
          and elapsed < 5.0)
    _criterion(
        "round-trip",
        ok,
        f"{identical}/{len(corpus)} structural identity, "
        f"{idempotent}/{len(corpus)} byte-idempotent encode, {elapsed:.2f}s "
        f"(limit 5s)")


def test_validator_conformance(corpus):
    started = time.monotonic()
    hook_sets = [frozenset(), ALL_HOOKS] + [frozenset([k]) for k in HookKind]
    blobs = []
    for name, blob in corpus.items():
        m = decode_module(blob)
        for hooks in hook_sets:
            inst, _, _ = instrument_module(m, hooks)
            blobs.append(encode_module(inst))
    verdicts = nodetools.validate_many(blobs)
    passed = sum(verdicts)
    elapsed = time.monotonic() - started
    ok = passed == len(blobs) and elapsed < 120.0
    _criterion(
        "validator-conformance",
        ok,
        f"{passed}/{len(blobs)} instrumented binaries pass the external "
        f"validator ({len(corpus)} modules x {len(hook_sets)} hook sets), "
        f"{elapsed:.1f}s (limit 120s)")


def test_typing_oracle_agreement(corpus):
    blobs = list(corpus.values())
    variants = mutations.generate(blobs, 120)
    assert len(variants) >= 100
    cases = blobs + variants

    def mine(blob):
        try:
            validate_module(decode_module(blob))
            return True
        except WasmProbeError:
            return False

    ours = [mine(b) for b in cases]
    theirs = nodetools.validate_many(cases)
    agree = sum(1 for a, b in zip(ours, theirs) if a == b)
    ok = agree == len(cases)
    _criterion(
        "typing-oracle-agreement",
        ok,
        f"{agree}/{len(cases)} verdicts match the external validator "
        f"({len(blobs)} valid + {len(variants)} mutation-corrupted)")


def test_monomorphization_count():
    m = decode_module(corpus_mod.CORPUS["call_sigs"])
    _, _, registry = instrument_module(m, ALL_HOOKS)
    pre = sum(1 for r in registry.refs() if r.kind == HookKind.CALL_PRE)
    post = sum(1 for r in registry.refs() if r.kind == HookKind.CALL_POST)
    ok = pre == 4 and post == 3 and len(registry) < 4 ** 6
    _criterion(
        "monomorphization-count",
        ok,
        f"{pre} call_pre variants (want 4), {post} call_post variants "
        f"(want 3), registry {len(registry)} < eager bound 4096")


def test_label_resolution_exact():
    # the two-nested-blocks program: br_if 1 at index 3 resolves to the
    # instruction after the outer block's end (index 6)
    fwd = [Instr("block"), Instr("block"), Instr("get_local", index=0),
           Instr("br_if", index=1), Instr("end"), Instr("end"), Instr("end")]
    stack = initial_stack(0, len(fwd))
    ends = match_ends(fwd)
    for idx in range(3):
        stack = control_stack_update(stack, fwd[idx], Location(0, idx), ends)
    fwd_target = resolve_label(stack, 1)

    # block around loop around br 1, preceded by four other instructions:
    # control stack is [function, block, loop], exits [loop, block]
    body = [Instr("nop")] * 4 + [Instr("block"), Instr("loop"),
                                 Instr("br", index=1), Instr("end"),
                                 Instr("end"), Instr("end")]
    stack2 = initial_stack(0, len(body))
    ends2 = match_ends(body)
    for idx in range(6):
        stack2 = control_stack_update(stack2, body[idx], Location(0, idx), ends2)
    frames = [f.block_type for f in stack2]
    ended = [f.block_type for f in resolve_label(stack2, 1).ended_blocks]

    ok = (fwd_target.location == Location(0, 6)
          and frames == ["function", "block", "loop"]
          and ended == ["loop", "block"])
    _criterion(
        "label-resolution",
        ok,
        f"forward br_if 1 -> instr {fwd_target.location.instr} (want 6); "
        f"stack {frames} (want [function, block, loop]); "
        f"endedBlocks(1) {ended} (want [loop, block])")


def test_size_monotonicity_and_selectivity(corpus):
    monotone_ok = 0
    checked_pairs = 0
    selective_ok = 0
    selective_total = 0
    for name, blob in corpus.items():
        m = decode_module(blob)
        empty_mod = instrument_module(m, frozenset())[0]
        empty_bytes = encode_module(empty_mod)
        all_bytes = encode_module(instrument_module(m, ALL_HOOKS)[0])
        base_code = code_section(empty_bytes)
        present = present_hook_kinds(m)
        module_ok = True
        for kind in HookKind:
            single = encode_module(instrument_module(m, frozenset([kind]))[0])
            checked_pairs += 1
            if not len(empty_bytes) <= len(single) <= len(all_bytes):
                module_ok = False
            if kind not in present:
                selective_total += 1
                if code_section(single) == base_code:
                    selective_ok += 1
        if module_ok:
            monotone_ok += 1
    ok = monotone_ok == len(corpus) and selective_ok == selective_total
    _criterion(
        "size-monotonicity-selectivity",
        ok,
        f"{monotone_ok}/{len(corpus)} modules monotone over {checked_pairs} "
        f"hook sets; {selective_ok}/{selective_total} absent-kind "
        f"instrumentations leave the code section byte-identical")
