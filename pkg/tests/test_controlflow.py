from __future__ import annotations

import pytest

from rawwasm import ModuleBuilder
from wasmprobe import (decode_module, Instr, Location, control_stack_update,
                       ended_blocks_for_return, match_ends, resolve_label)
from wasmprobe.controlflow import initial_stack
from wasmprobe.errors import BranchLabelOutOfRange, UnbalancedEnd
from wasmprobe.opcodes import OPS


def _body(*ops):
    out = []
    for item in ops:
        if isinstance(item, str):
            out.append(Instr(item))
        else:
            op, arg = item
            if op in ("block", "loop", "if"):
                out.append(Instr(op, block_type=arg))
            else:
                out.append(Instr(op, index=arg))
    return out


def _walk(body, func=0, upto=None):
    """Control stack right before instruction index `upto` (or after all)."""
    ends = match_ends(body)
    stack = initial_stack(func, len(body))
    for idx, ins in enumerate(body):
        if upto is not None and idx == upto:
            return stack
        stack = control_stack_update(stack, ins, Location(func, idx), ends)
    return stack


# The two-nested-blocks program with a conditional forward branch:
#   0 block, 1 block, 2 get_local, 3 br_if 1, 4 end, 5 end, 6 end(function)
FORWARD = _body(("block", None), ("block", None), ("get_local", 0),
                ("br_if", 1), "end", "end", "end")


def test_forward_branch_resolves_past_outer_end():
    stack = _walk(FORWARD, upto=3)
    target = resolve_label(stack, 1)
    assert target.location == Location(0, 6)     # after the outer block's end
    assert [f.block_type for f in target.ended_blocks] == ["block", "block"]


def test_branch_label_zero_targets_inner_block():
    stack = _walk(FORWARD, upto=3)
    target = resolve_label(stack, 0)
    assert target.location == Location(0, 5)
    assert len(target.ended_blocks) == 1


def test_loop_target_is_backward_jump():
    # 0 block, 1 loop, 2 br 0, 3 end, 4 end, 5 end
    body = _body(("block", None), ("loop", None), ("br", 0), "end", "end", "end")
    stack = _walk(body, upto=2)
    target = resolve_label(stack, 0)
    assert target.location == Location(0, 2)     # first instruction in the loop
    assert target.ended_blocks[0].block_type == "loop"


def test_four_preceding_instructions_configuration():
    # nop x4, block@4, loop@5, br 1 @6, end@7, end@8, end@9
    body = _body("nop", "nop", "nop", "nop", ("block", None), ("loop", None),
                 ("br", 1), "end", "end", "end")
    stack = _walk(body, upto=6)
    assert [f.block_type for f in stack] == ["function", "block", "loop"]
    assert stack[1].begin == Location(0, 4) and stack[1].end == Location(0, 8)
    assert stack[2].begin == Location(0, 5) and stack[2].end == Location(0, 7)
    target = resolve_label(stack, 1)
    assert [f.block_type for f in target.ended_blocks] == ["loop", "block"]
    assert target.location == Location(0, 9)


def test_empty_function_body_pops_function_frame():
    body = _body("end")
    assert _walk(body) == ()


def test_else_frame_shares_end_location():
    # 0 get_local, 1 if, 2 nop, 3 else, 4 nop, 5 end, 6 end
    body = _body(("get_local", 0), ("if", None), "nop", "else", "nop",
                 "end", "end")
    at_then = _walk(body, upto=2)
    at_else_body = _walk(body, upto=4)
    assert at_then[-1].block_type == "if"
    assert at_else_body[-1].block_type == "else"
    assert at_then[-1].end == at_else_body[-1].end == Location(0, 5)
    assert at_else_body[-1].begin == Location(0, 3)


def test_label_out_of_range():
    stack = _walk(FORWARD, upto=3)
    with pytest.raises(BranchLabelOutOfRange):
        resolve_label(stack, len(stack))


def test_ended_blocks_for_return_covers_whole_stack():
    body = _body(("block", None), ("block", None), ("block", None),
                 "nop", "end", "end", "end", "end")
    stack = _walk(body, upto=3)
    frames = ended_blocks_for_return(stack)
    assert [f.block_type for f in frames] == ["block", "block", "block",
                                              "function"]
    only_function = ended_blocks_for_return(initial_stack(0, 1))
    assert [f.block_type for f in only_function] == ["function"]


def test_unbalanced_end_raises():
    body = _body("end", "nop")
    ends = match_ends(body)
    stack = initial_stack(0, len(body))
    with pytest.raises(UnbalancedEnd):
        stack = control_stack_update(stack, body[0], Location(0, 0), ends)


def test_match_ends_agrees_with_nesting_counter(corpus):
    for name, blob in corpus.items():
        m = decode_module(blob)
        for fidx, fn in m.defined_functions():
            ends = match_ends(fn.body)
            for begin, end in ends.items():
                assert begin < end, name
                cat = OPS[fn.body[begin].op].category
                assert cat in ("block", "loop", "if", "else")
                assert fn.body[end].op == "end"
                # nesting counter between begin and its end stays positive
                if cat != "else":
                    depth = 0
                    for k in range(begin, end):
                        c = OPS[fn.body[k].op].category
                        if c in ("block", "loop", "if"):
                            depth += 1
                        elif c == "end":
                            depth -= 1
                        assert depth > 0, name
                    assert depth == 1


def test_every_corpus_branch_resolves(corpus):
    for name, blob in corpus.items():
        m = decode_module(blob)
        for fidx, fn in m.defined_functions():
            ends = match_ends(fn.body)
            stack = initial_stack(fidx, len(fn.body))
            for idx, ins in enumerate(fn.body):
                cat = OPS[ins.op].category
                labels = ()
                if cat in ("br", "br_if"):
                    labels = (ins.index,)
                elif cat == "br_table":
                    labels = tuple(ins.labels) + (ins.default_label,)
                for label in labels:
                    t = resolve_label(stack, label)
                    assert len(t.ended_blocks) == label + 1, name
                    assert 0 <= t.location.instr <= len(fn.body), name
                    assert t.location.func == fidx
                stack = control_stack_update(stack, ins, Location(fidx, idx), ends)
            assert stack == (), name
