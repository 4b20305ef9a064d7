/**
 * Minimal shadow-value taint demo.
 *
 * Keeps a shadow of the operand stack, locals, globals and memory bytes,
 * advanced purely from the hook stream: loads pick up the taint of the
 * bytes they read, operators propagate the union of their operands' marks,
 * stores write the value's mark back to memory. Sources are memory byte
 * addresses.
 *
 * Demo-scale on purpose: results of calls are treated as clean, and
 * branches that discard block operands are not modeled, so it is meant for
 * straight-line flows (see the taint_flow test program).
 */

import { AnalysisCallbacks } from "../types";

function accessWidth(op: string): number {
  const m = op.match(/(?:load|store)(8|16|32)?/);
  if (m && m[1]) {
    return Number(m[1]) / 8;
  }
  return op.startsWith("i64") || op.startsWith("f64") ? 8 : 4;
}

export interface TaintShadow {
  callbacks: AnalysisCallbacks;
  isTainted(addr: number): boolean;
  taintedAddresses(): number[];
}

export function createTaintShadow(sourceAddrs: Iterable<number>): TaintShadow {
  const memTaint = new Set<number>(sourceAddrs);
  const stack: boolean[] = [];
  const locals = new Map<number, boolean>();
  const globals = new Map<number, boolean>();

  const pop = () => stack.pop() ?? false;
  const push = (t: boolean) => { stack.push(t); };

  const callbacks: AnalysisCallbacks = {
    const_() { push(false); },
    unary() { push(pop()); },
    binary() { const b = pop(); const a = pop(); push(a || b); },
    drop() { pop(); },
    select(_loc, cond) {
      const taintCond = pop();
      const second = pop();
      const first = pop();
      push((cond ? first : second) || taintCond);
    },
    local(_loc, op, index) {
      if (op === "get_local") {
        push(locals.get(index) ?? false);
      } else if (op === "set_local") {
        locals.set(index, pop());
      } else {
        const top = stack[stack.length - 1] ?? false;
        locals.set(index, top);
      }
    },
    global(_loc, op, index) {
      if (op === "get_global") {
        push(globals.get(index) ?? false);
      } else {
        globals.set(index, pop());
      }
    },
    load(_loc, op, memarg) {
      pop();                                   // the address operand
      let tainted = false;
      const base = memarg.addr + memarg.offset;
      for (let i = 0; i < accessWidth(op); i++) {
        if (memTaint.has(base + i)) {
          tainted = true;
        }
      }
      push(tainted);
    },
    store(_loc, op, memarg) {
      const valueTaint = pop();
      pop();                                   // the address operand
      const base = memarg.addr + memarg.offset;
      for (let i = 0; i < accessWidth(op); i++) {
        if (valueTaint) {
          memTaint.add(base + i);
        } else {
          memTaint.delete(base + i);
        }
      }
    },
    memory_size() { push(false); },
    memory_grow() { pop(); push(false); },
    if_() { pop(); },
    br_if() { pop(); },
    br_table() { pop(); },
    call_pre(_loc, _func, args, tableIndex) {
      for (let i = 0; i < args.length; i++) {
        pop();
      }
      if (tableIndex !== null) {
        pop();
      }
    },
    call_post(_loc, results) {
      for (let i = 0; i < results.length; i++) {
        push(false);                           // demo: callees launder taint
      }
    },
  };

  return {
    callbacks,
    isTainted: (addr) => memTaint.has(addr),
    taintedAddresses: () => [...memTaint].sort((a, b) => a - b),
  };
}
