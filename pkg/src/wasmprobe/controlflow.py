"""Abstract control stack: block frames, branch-label resolution, and the
ordered list of blocks a branch or return exits.

Frames carry (block type, begin location, matching end location). The end
locations come from a single linear pre-pass (`match_ends`) because a frame
must know its end when pushed. The bottom frame is always the function frame
with begin.instr == -1 and end at the body's final `end`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BranchLabelOutOfRange, UnbalancedEnd
from .ir import Instr, Location
from .opcodes import OPS

BLOCK_KINDS = ("function", "block", "loop", "if", "else")


@dataclass(frozen=True, slots=True)
class ControlFrame:
    block_type: str
    begin: Location
    end: Location


@dataclass(frozen=True, slots=True)
class BranchTarget:
    label: int
    location: Location
    ended_blocks: tuple[ControlFrame, ...]   # innermost first, target inclusive


def match_ends(body: list[Instr]) -> dict[int, int]:
    """Map each block/loop/if/else instruction index to its matching end."""
    ends: dict[int, int] = {}
    open_stack: list[int] = []
    for idx, ins in enumerate(body):
        cat = OPS[ins.op].category
        if cat in ("block", "loop", "if"):
            open_stack.append(idx)
        elif cat == "else":
            if not open_stack:
                raise UnbalancedEnd("else outside any block", Location(-1, idx))
            open_stack.append(idx)   # resolved together with the if at `end`
        elif cat == "end":
            if not open_stack:
                continue             # the function's own final end
            begin = open_stack.pop()
            ends[begin] = idx
            if OPS[body[begin].op].category == "else":
                begin = open_stack.pop()
                ends[begin] = idx
    if open_stack:
        raise UnbalancedEnd(f"{len(open_stack)} unclosed block(s)",
                            Location(-1, len(body) - 1))
    return ends


def function_frame(func_index: int, body_len: int) -> ControlFrame:
    return ControlFrame("function", Location(func_index, -1),
                        Location(func_index, body_len - 1))


def initial_stack(func_index: int, body_len: int) -> tuple[ControlFrame, ...]:
    return (function_frame(func_index, body_len),)


def control_stack_update(stack: tuple[ControlFrame, ...], instr: Instr,
                         loc: Location, ends: dict[int, int]) -> tuple[ControlFrame, ...]:
    cat = OPS[instr.op].category
    if cat in ("block", "loop", "if"):
        frame = ControlFrame(cat, loc, Location(loc.func, ends[loc.instr]))
        return stack + (frame,)
    if cat == "else":
        if not stack or stack[-1].block_type != "if":
            raise UnbalancedEnd("else without matching if frame", loc)
        return stack[:-1] + (ControlFrame("else", loc, stack[-1].end),)
    if cat == "end":
        if not stack:
            raise UnbalancedEnd("end with empty control stack", loc)
        if len(stack) == 1 and loc.instr != stack[0].end.instr:
            raise UnbalancedEnd("function frame closed before the final end", loc)
        return stack[:-1]
    return stack


def resolve_label(stack: tuple[ControlFrame, ...], label: int) -> BranchTarget:
    """Resolve a relative label against the current control stack.

    The target frame is the (label+1)-th from the top. A loop target
    continues at the first instruction inside the loop; any other target
    continues right after the frame's matching end (for the function frame
    that is one past the final end, i.e. function exit).
    """
    if label >= len(stack):
        raise BranchLabelOutOfRange(
            f"label {label} exceeds control stack height {len(stack)}", None)
    target = stack[-1 - label]
    if target.block_type == "loop":
        location = Location(target.begin.func, target.begin.instr + 1)
    else:
        location = Location(target.end.func, target.end.instr + 1)
    ended = tuple(reversed(stack[len(stack) - 1 - label:]))
    return BranchTarget(label, location, ended)


def ended_blocks_for_return(stack: tuple[ControlFrame, ...]) -> tuple[ControlFrame, ...]:
    """Every frame from innermost to and including the function frame."""
    if not stack:
        raise UnbalancedEnd("empty control stack", None)
    return tuple(reversed(stack))
