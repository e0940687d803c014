"""Meet-over-all-valid-paths reference for the tabulation solver.

Explores (node, fact, call stack) states by plain BFS, so every fact it
reports is witnessed by one concrete interprocedurally valid path. No
summarization happens anywhere; agreement with the worklist solver is the
correctness check. Unsuitable for recursive programs (the stack is capped).
"""

from __future__ import annotations

from collections import deque

from arklight.ifds.solver import ZERO

MAX_STACK = 40


class StackDepthExceeded(Exception):
    pass


def movp_facts(sg, ff, seeds=()):
    """Facts per node over all valid paths; same shape as IfdsResult.facts."""
    seeds_by_node: dict = {}
    for node, fact in seeds:
        if node in sg.stmt_of:
            seeds_by_node.setdefault(node, []).append(fact)

    facts: dict = {}
    visited = set()
    work: deque = deque()

    def push(node, fact, stack):
        if len(stack) > MAX_STACK:
            raise StackDepthExceeded("call stack cap hit; fixture too deep")
        state = (node, fact, stack)
        if state in visited:
            return
        visited.add(state)
        facts.setdefault(node, set()).add(fact)
        work.append(state)
        if fact is ZERO:
            # A seed holds whenever execution reaches its node.
            for seeded in seeds_by_node.get(node, ()):
                push(node, seeded, stack)

    for text in sg.entry_points:
        if text in sg.entry:
            push(sg.entry[text], ZERO, ())
    for node, fact in seeds:
        if node in sg.stmt_of:
            push(node, fact, ())

    while work:
        node, fact, stack = work.popleft()
        text = node[0]
        info = sg.calls.get(node)

        if info is not None:
            if info.return_site is None:
                continue
            for callee in info.callees:
                for d3 in ff.call(info.stmt, callee, fact):
                    push(sg.entry[callee], d3, stack + (node,))
            for d3 in ff.call_to_return(info.stmt, fact, tuple(info.callees)):
                push(info.return_site, d3, stack)
            continue

        if node in sg.exits.get(text, ()):
            if not stack:
                continue
            call_node = stack[-1]
            caller_info = sg.calls[call_node]
            if caller_info.return_site is None:
                continue
            for d5 in ff.ret(caller_info.stmt, text, sg.stmt_of[node], fact):
                push(caller_info.return_site, d5, stack[:-1])
            continue

        stmt = sg.stmt_of[node]
        for succ in sg.succ.get(node, ()):
            for d3 in ff.normal(stmt, fact):
                push(succ, d3, stack)

    return facts
