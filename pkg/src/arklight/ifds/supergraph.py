"""Interprocedural control flow graph over lowered method bodies.

Nodes are (method signature text, stmt id) pairs. Four edge kinds connect
them: Normal edges mirror the intraprocedural CFG, Call edges enter a
callee, ReturnToExit edges leave it, and CallToReturn edges step over the
call site inside the caller. Call sites whose targets have no analyzable
body (stubs, unresolved calls) contribute only their CallToReturn edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagnostics import SupergraphError
from ..ir.model import Invoke, Return

Node = tuple[str, int]


@dataclass
class CallInfo:
    """One Invoke site: its resolved analyzable callees and return site."""

    node: Node
    stmt: Invoke
    callees: list[str] = field(default_factory=list)
    return_site: Node | None = None


@dataclass
class Supergraph:
    methods: dict[str, object] = field(default_factory=dict)   # text -> ArkMethod
    entry: dict[str, Node] = field(default_factory=dict)
    exits: dict[str, list[Node]] = field(default_factory=dict)
    succ: dict[Node, list[Node]] = field(default_factory=dict)
    calls: dict[Node, CallInfo] = field(default_factory=dict)
    stmt_of: dict[Node, object] = field(default_factory=dict)
    entry_points: list[str] = field(default_factory=list)

    def method_of(self, node: Node):
        return self.methods[node[0]]

    def nodes(self) -> list[Node]:
        return sorted(self.stmt_of)

    def edge_counts(self) -> dict[str, int]:
        call = sum(len(info.callees) for info in self.calls.values())
        ret = sum(
            len(self.exits[callee])
            for info in self.calls.values()
            for callee in info.callees
        )
        return {
            "normal": sum(len(v) for v in self.succ.values()),
            "call": call,
            "return": ret,
            "call_to_return": sum(
                1 for info in self.calls.values() if info.return_site is not None
            ),
        }


def _site_callees(scene, cg) -> dict[tuple[str, int], list[str]]:
    """Map (caller text, stmt id) to callee signature texts, body-backed only."""
    out: dict[tuple[str, int], list[str]] = {}
    for site_id, caller, callee in sorted(
        cg.edges, key=lambda e: (e[1].text(), e[0], e[2].text())
    ):
        site = cg.sites[site_id]
        target = scene.lookup_method(callee)
        if target is None or target.body is None:
            continue  # stub or unresolvable; the node sweep validates it
        key = (caller.text(), site.stmt_id)
        bucket = out.setdefault(key, [])
        if callee.text() not in bucket:
            bucket.append(callee.text())
    return out


def build_supergraph(scene, cg) -> Supergraph:
    """Assemble the supergraph for every body-backed method in the call graph."""
    sg = Supergraph(entry_points=[sig.text() for sig in cg.entry_points])
    callee_map = _site_callees(scene, cg)

    for sig in sorted(cg.nodes, key=lambda s: s.text()):
        text = sig.text()
        method = scene.lookup_method(text)
        if method is None:
            raise SupergraphError(f"call graph node {text} is not in the scene")
        if method.body is None:
            if method.is_stub:
                continue
            raise SupergraphError(f"{text} has no body and is not a stub")
        sg.methods[text] = method
        cfg = method.body.cfg
        entry_block = cfg.block(cfg.entry)
        if not entry_block.stmts:
            raise SupergraphError(f"{text} lowered to an empty body")
        sg.entry[text] = (text, entry_block.stmts[0].stmt_id)
        sg.exits[text] = []

        for block in cfg.blocks:
            for offset, stmt in enumerate(block.stmts):
                node = (text, stmt.stmt_id)
                sg.stmt_of[node] = stmt
                if offset + 1 < len(block.stmts):
                    succs = [(text, block.stmts[offset + 1].stmt_id)]
                else:
                    succs = [
                        (text, cfg.block(b).stmts[0].stmt_id)
                        for b in block.successors
                        if cfg.block(b).stmts
                    ]
                if isinstance(stmt, Return):
                    sg.exits[text].append(node)
                    continue
                if isinstance(stmt, Invoke):
                    info = CallInfo(node=node, stmt=stmt)
                    info.callees = callee_map.get((text, stmt.stmt_id), [])
                    info.return_site = succs[0] if succs else None
                    sg.calls[node] = info
                    continue
                sg.succ[node] = succs

    # Drop call targets whose bodies never made it into the graph (a callee
    # can be stub-backed while still appearing in cg.edges via an override).
    for info in sg.calls.values():
        info.callees = [c for c in info.callees if c in sg.methods]
    return sg
