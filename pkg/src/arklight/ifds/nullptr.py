"""May-undefined analysis: fields a constructor leaves unassigned.

Facts are access paths of length at most two (a local, ``local.field``, or
``this.field``) that may hold undefined. Seeds come from constructors: any
declared instance field (own or inherited) the constructor never stores is
undefined at the constructor's exits, and return flow rewrites ``this`` to
the receiver so the fact follows the new object into the caller. A store
kills the path. Dereferencing a local that carries a bare fact (field
access, indexing, or a method call on it) is a finding.

No aliasing and no globals: facts only move through assignments, receiver
binding, argument passing, and returned locals. Paths longer than two are
dropped, which keeps the analysis a may-approximation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..diagnostics import Span
from ..ir.model import (
    ArrayRef,
    Assign,
    Constant,
    FieldRef,
    Invoke,
    Local,
    New,
    Return,
    ThisRef,
)
from ..scenemodel import CONSTRUCTOR, MethodSignature
from .solver import ZERO, FlowFunctions, IfdsResult, solve
from .supergraph import Node, Supergraph, build_supergraph

THIS = "this"


@dataclass(frozen=True)
class NullFact:
    base: str                 # local name, or "this"
    field: str | None = None

    def text(self) -> str:
        return self.base if self.field is None else f"{self.base}.{self.field}"


def _root(value) -> str | None:
    if isinstance(value, Local):
        return value.name
    if isinstance(value, ThisRef):
        return THIS
    return None


def _is_nullish(value) -> bool:
    return isinstance(value, Constant) and value.kind in ("null", "undefined")


class NullFlow(FlowFunctions):
    def __init__(self, sg: Supergraph):
        self.sg = sg

    def normal(self, stmt, fact) -> list:
        if fact is ZERO:
            out = [ZERO]
            if isinstance(stmt, Assign) and _is_nullish(stmt.rhs):
                if isinstance(stmt.lhs, Local):
                    out.append(NullFact(stmt.lhs.name))
                elif isinstance(stmt.lhs, FieldRef):
                    root = _root(stmt.lhs.base)
                    if root is not None:
                        out.append(NullFact(root, stmt.lhs.field))
            return out

        if isinstance(stmt, Assign):
            lhs, rhs = stmt.lhs, stmt.rhs
            if isinstance(lhs, Local):
                if isinstance(rhs, Local):
                    if fact.base == rhs.name:
                        copied = NullFact(lhs.name, fact.field)
                        return [fact] if copied == fact else [fact, copied]
                    if fact.base == lhs.name:
                        return []
                    return [fact]
                if isinstance(rhs, FieldRef):
                    root = _root(rhs.base)
                    if fact.base == root and fact.field == rhs.field:
                        return [fact, NullFact(lhs.name)]
                    if fact.base == lhs.name:
                        return []
                    return [fact]
                # constants, operators, refs, array loads: lhs is overwritten
                if fact.base == lhs.name:
                    return []
                return [fact]
            if isinstance(lhs, FieldRef):
                root = _root(lhs.base)
                out = []
                if not (fact.base == root and fact.field == lhs.field):
                    out.append(fact)
                if (
                    isinstance(rhs, Local)
                    and fact.base == rhs.name
                    and fact.field is None
                    and root is not None
                ):
                    out.append(NullFact(root, lhs.field))
                return out
            return [fact]

        if isinstance(stmt, New):
            return [] if fact.base == stmt.result.name else [fact]
        return [fact]

    def call(self, stmt, callee: str, fact) -> list:
        if fact is ZERO:
            return [ZERO]
        out = []
        if isinstance(stmt.base, Local) and fact.base == stmt.base.name:
            out.append(NullFact(THIS, fact.field))
        elif isinstance(stmt.base, ThisRef) and fact.base == THIS:
            out.append(NullFact(THIS, fact.field))
        params = self.sg.methods[callee].body.params
        for i, arg in enumerate(stmt.args):
            if isinstance(arg, Local) and fact.base == arg.name and i < len(params):
                mapped = NullFact(params[i], fact.field)
                if mapped not in out:
                    out.append(mapped)
        return out

    def ret(self, stmt, callee: str, exit_stmt, fact) -> list:
        if fact is ZERO:
            out = [ZERO]
            if (
                isinstance(exit_stmt, Return)
                and _is_nullish(exit_stmt.value)
                and stmt.result is not None
            ):
                out.append(NullFact(stmt.result.name))
            return out
        out = []
        if fact.base == THIS:
            if isinstance(stmt.base, Local):
                out.append(NullFact(stmt.base.name, fact.field))
            elif isinstance(stmt.base, ThisRef):
                out.append(NullFact(THIS, fact.field))
        if (
            isinstance(exit_stmt, Return)
            and isinstance(exit_stmt.value, Local)
            and fact.base == exit_stmt.value.name
            and stmt.result is not None
        ):
            mapped = NullFact(stmt.result.name, fact.field)
            if mapped not in out:
                out.append(mapped)
        return out

    def call_to_return(self, stmt, fact, analyzed_callees) -> list:
        if fact is ZERO:
            return [ZERO]
        if stmt.result is not None and fact.base == stmt.result.name:
            return []
        if analyzed_callees and fact.field is not None:
            # Field paths rooted at the receiver or an argument travel
            # through the callee; keeping them here would bypass its kills.
            if isinstance(stmt.base, Local) and fact.base == stmt.base.name:
                return []
            if isinstance(stmt.base, ThisRef) and fact.base == THIS:
                return []
            for arg in stmt.args:
                if isinstance(arg, Local) and fact.base == arg.name:
                    return []
        return [fact]


def _instance_fields(scene, cls) -> list[str]:
    """Own and inherited instance field names, nearest declaration wins."""
    seen: dict[str, None] = {}
    cur = cls
    guard = 0
    while cur is not None and guard < 64:
        for fld in cur.fields:
            if not fld.is_static:
                seen.setdefault(fld.name, None)
        cur = (
            scene.resolve_class(cur.superclass_name, cur.signature.file,
                                cur.signature.namespace)
            if cur.superclass_name
            else None
        )
        guard += 1
    return list(seen)


def null_seeds(scene, sg: Supergraph) -> list[tuple[Node, NullFact]]:
    """This.field at each constructor exit, for fields it never stores."""
    seeds = []
    for text in sorted(sg.methods):
        method = sg.methods[text]
        if method.name != CONSTRUCTOR:
            continue
        cls = scene.lookup_class(method.signature.cls)
        if cls is None or cls.kind == "interface":
            continue
        assigned = set()
        for stmt in method.body.cfg.stmts():
            if (
                isinstance(stmt, Assign)
                and isinstance(stmt.lhs, FieldRef)
                and isinstance(stmt.lhs.base, ThisRef)
            ):
                assigned.add(stmt.lhs.field)
        for name in _instance_fields(scene, cls):
            if name in assigned:
                continue
            for exit_node in sg.exits[text]:
                seeds.append((exit_node, NullFact(THIS, name)))
    return seeds


@dataclass(frozen=True)
class Finding:
    method: MethodSignature
    span: Span
    path: str
    trace: tuple[tuple[str, int], ...]   # (method text, line) steps, seed first

    def key(self):
        return (self.method.text(), self.span.start_line, self.span.start_col,
                self.path)


def _deref_roots(stmt) -> list[str]:
    """Locals whose undefined value would fault this statement."""
    roots = []
    if isinstance(stmt, Assign):
        for side in (stmt.rhs, stmt.lhs):
            if isinstance(side, (FieldRef, ArrayRef)) and isinstance(side.base, Local):
                roots.append(side.base.name)
    elif isinstance(stmt, Invoke) and isinstance(stmt.base, Local):
        roots.append(stmt.base.name)
    return roots


def collect_findings(sg: Supergraph, result: IfdsResult) -> list[Finding]:
    found: dict[tuple, Finding] = {}
    for node in sg.nodes():
        stmt = sg.stmt_of[node]
        facts = result.facts_at(node)
        if not facts:
            continue
        for root in _deref_roots(stmt):
            fact = NullFact(root)
            if fact not in facts:
                continue
            steps = result.trace(node, fact)
            seed_fact = steps[0][1]
            path = seed_fact.text() if isinstance(seed_fact, NullFact) else fact.text()
            trace = []
            for step_node, _ in steps:
                entry = (step_node[0], sg.stmt_of[step_node].span.start_line)
                if not trace or trace[-1] != entry:
                    trace.append(entry)
            finding = Finding(
                method=sg.methods[node[0]].signature,
                span=stmt.span,
                path=path,
                trace=tuple(trace),
            )
            found.setdefault(finding.key(), finding)
    return sorted(found.values(), key=lambda f: f.key())


def null_pointer_analysis(scene, cg) -> list[Finding]:
    """Run the undefined-field client over a prebuilt call graph."""
    sg = build_supergraph(scene, cg)
    flow = NullFlow(sg)
    seeds = null_seeds(scene, sg)
    result = solve(sg, flow, seeds)
    return collect_findings(sg, result)


def findings_to_json(findings) -> str:
    payload = {
        "analysis": "nullptr",
        "findings": [
            {
                "method": f.method.text(),
                "line": f.span.start_line,
                "col": f.span.start_col,
                "path": f.path,
                "trace": [
                    {"method": method, "line": line} for method, line in f.trace
                ],
            }
            for f in findings
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
