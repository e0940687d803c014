"""Exhaustive tabulation over the supergraph.

The solver propagates path edges (d1 at the procedure entry reaches d2 at
node n) from a worklist, builds summary edges for solved callees, and keeps
one witness predecessor per (node, fact) so clients can reconstruct a
concrete supergraph path back to the seed that produced a fact.

Flow functions are pointwise: each takes a single input fact and returns
the facts it becomes across one edge. ZERO is the distinguished empty fact;
flow functions must map ZERO to at least ZERO so reachability itself
propagates. Summary reuse is an optimization only: results are identical
with ``use_summaries=False``, which re-derives return flow from recorded
exit edges each time a new caller reaches a callee.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .supergraph import Node, Supergraph


class _Zero:
    __slots__ = ()

    def __repr__(self) -> str:
        return "0"


ZERO = _Zero()


class FlowFunctions:
    """Per-edge-kind fact transformers. Subclass and override all four."""

    def normal(self, stmt, fact) -> list:
        raise NotImplementedError

    def call(self, stmt, callee: str, fact) -> list:
        raise NotImplementedError

    def ret(self, stmt, callee: str, exit_stmt, fact) -> list:
        raise NotImplementedError

    def call_to_return(self, stmt, fact, analyzed_callees) -> list:
        raise NotImplementedError


@dataclass
class IfdsResult:
    facts: dict[Node, set] = field(default_factory=dict)
    witness: dict[tuple[Node, object], tuple[Node, object] | None] = field(
        default_factory=dict
    )

    def facts_at(self, node: Node) -> set:
        return self.facts.get(node, set())

    def trace(self, node: Node, fact) -> list[tuple[Node, object]]:
        """Walk witnesses back to the seed; returned seed-first."""
        steps = [(node, fact)]
        seen = {(node, id(fact))}
        cur = self.witness.get((node, fact))
        while cur is not None:
            key = (cur[0], id(cur[1]))
            if key in seen:
                break  # defensive: witness graphs are acyclic by construction
            seen.add(key)
            steps.append(cur)
            cur = self.witness.get(cur)
        steps.reverse()
        return steps


def solve(sg: Supergraph, ff: FlowFunctions, seeds=(), use_summaries=True) -> IfdsResult:
    """Run the tabulation.

    ``seeds`` is an iterable of (node, fact) pairs injected as if generated
    at that node from the entry context. ZERO is additionally seeded at
    every entry point's first statement, so with no client seeds every
    reachable node holds exactly {ZERO}.
    """
    result = IfdsResult()
    # (d1, node, d2) path edges; dict preserves insertion order so the
    # worklist (and therefore witness selection) is deterministic.
    path_edges: dict[tuple[object, Node, object], None] = {}
    work: deque = deque()
    # (node, d2) -> {d1: None}: entry contexts under which d2 reaches node.
    contexts: dict[tuple[Node, object], dict] = {}
    # (callee text, entry fact) -> {(call node, caller fact): None}
    incoming: dict[tuple[str, object], dict] = {}
    # (callee text, entry fact) -> {(exit node, exit fact): None}
    exit_facts: dict[tuple[str, object], dict] = {}
    # (call node, caller fact) -> {(ret fact, exit node, exit fact): None}
    summaries: dict[tuple[Node, object], dict] = {}

    def propagate(d1, node, d2, src):
        key = (d1, node, d2)
        if key in path_edges:
            return
        path_edges[key] = None
        work.append(key)
        result.facts.setdefault(node, set()).add(d2)
        result.witness.setdefault((node, d2), src)
        contexts.setdefault((node, d2), {})[d1] = None

    for text in sg.entry_points:
        if text in sg.entry:
            propagate(ZERO, sg.entry[text], ZERO, None)
    for node, fact in seeds:
        if node in sg.stmt_of:
            propagate(ZERO, node, fact, None)

    def flow_return(info, callee, exit_node, exit_fact, caller_fact, d1_set):
        """Map one callee exit fact back into one caller context."""
        for d5 in ff.ret(info.stmt, callee, sg.stmt_of[exit_node], exit_fact):
            if use_summaries:
                summaries.setdefault((info.node, caller_fact), {})[
                    (d5, exit_node, exit_fact)
                ] = None
            for d1 in list(d1_set):
                propagate(d1, info.return_site, d5, (exit_node, exit_fact))

    while work:
        d1, node, d2 = work.popleft()
        text = node[0]
        info = sg.calls.get(node)

        if info is not None:
            if info.return_site is None:
                continue
            for callee in info.callees:
                for d3 in ff.call(info.stmt, callee, d2):
                    propagate(d3, sg.entry[callee], d3, (node, d2))
                    inc = incoming.setdefault((callee, d3), {})
                    if (node, d2) not in inc:
                        inc[(node, d2)] = None
                        # Replay exits already discovered under this context
                        # so this caller still receives return flow.
                        for exit_node, exit_fact in list(
                            exit_facts.get((callee, d3), {})
                        ):
                            flow_return(
                                info, callee, exit_node, exit_fact, d2,
                                contexts.get((node, d2), {}),
                            )
                    elif not use_summaries:
                        # Known caller, new entry context d1: without cached
                        # summaries, re-derive return flow for d1 alone.
                        for exit_node, exit_fact in list(
                            exit_facts.get((callee, d3), {})
                        ):
                            flow_return(
                                info, callee, exit_node, exit_fact, d2, (d1,)
                            )
            if use_summaries:
                for (d5, exit_node, exit_fact) in list(summaries.get((node, d2), {})):
                    propagate(d1, info.return_site, d5, (exit_node, exit_fact))
            for d3 in ff.call_to_return(info.stmt, d2, tuple(info.callees)):
                propagate(d1, info.return_site, d3, (node, d2))
            continue

        if node in sg.exits.get(text, ()):
            exit_facts.setdefault((text, d1), {})[(node, d2)] = None
            for call_node, caller_fact in list(incoming.get((text, d1), {})):
                caller_info = sg.calls[call_node]
                if caller_info.return_site is None:
                    continue
                flow_return(
                    caller_info, text, node, d2, caller_fact,
                    contexts.get((call_node, caller_fact), {}),
                )
            continue

        stmt = sg.stmt_of[node]
        for succ in sg.succ.get(node, ()):
            for d3 in ff.normal(stmt, d2):
                propagate(d1, succ, d3, (node, d2))

    return result
