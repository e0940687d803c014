"""Reaching definitions and def-use chains over a method CFG.

A definition is any statement writing a Local (assignment, call result,
allocation); parameters count as defined at the synthetic id PARAM_DEF.
Links are graph-path facts: a def links to a use iff some CFG path connects
them without an intervening redefinition, dead blocks included. Uses with no
reaching definition in live code surface as MAYBE_UNDEFINED.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..diagnostics import Diagnostic, MAYBE_UNDEFINED, warning
from ..ir import ArkBody, Assign, FieldRef, ArrayRef, If, Invoke, Local, New, Return
from ..ir.model import expr_values

PARAM_DEF = -1


@dataclass
class DefUseChain:
    """Per-local def sites, use sites, and reaching (def, use) links."""

    defs: dict[str, list[int]] = dc_field(default_factory=dict)
    uses: dict[str, list[int]] = dc_field(default_factory=dict)
    links: dict[str, list[tuple[int, int]]] = dc_field(default_factory=dict)
    diagnostics: list[Diagnostic] = dc_field(default_factory=list)

    def defs_reaching(self, name: str, use_id: int) -> list[int]:
        return [d for d, u in self.links.get(name, []) if u == use_id]

    def uses_reached(self, name: str, def_id: int) -> list[int]:
        return [u for d, u in self.links.get(name, []) if d == def_id]


def stmt_def(stmt) -> str | None:
    """Name of the Local this statement writes, if any."""
    if isinstance(stmt, Assign) and isinstance(stmt.lhs, Local):
        return stmt.lhs.name
    if isinstance(stmt, Invoke) and isinstance(stmt.result, Local):
        return stmt.result.name
    if isinstance(stmt, New) and isinstance(stmt.result, Local):
        return stmt.result.name
    return None


def _local_names(value) -> list[str]:
    return [v.name for v in expr_values(value) if isinstance(v, Local)]


def stmt_reads(stmt) -> list[str]:
    """Locals this statement reads, in operand order (duplicates kept)."""
    if isinstance(stmt, Assign):
        out = _local_names(stmt.rhs)
        # a store through a field or index reads its base (and index)
        if isinstance(stmt.lhs, (FieldRef, ArrayRef)):
            out.extend(_local_names(stmt.lhs))
        return out
    if isinstance(stmt, Invoke):
        out = _local_names(stmt.base) if stmt.base is not None else []
        for arg in stmt.args:
            out.extend(_local_names(arg))
        return out
    if isinstance(stmt, If):
        return _local_names(stmt.cond)
    if isinstance(stmt, Return) and stmt.value is not None:
        return _local_names(stmt.value)
    return []


def stmt_reads_in(stmt, local_names) -> list[str]:
    """stmt_reads, plus the callee of a direct call when it names a local
    (calling through a function-valued variable reads that variable)."""
    out = stmt_reads(stmt)
    if isinstance(stmt, Invoke) and stmt.base is None \
            and stmt.callee in local_names:
        out.insert(0, stmt.callee)
    return out


def build_def_use(body: ArkBody) -> DefUseChain:
    """Fixpoint reaching definitions, then one linking sweep per block."""
    cfg = body.cfg
    path = body.signature.cls.file
    chain = DefUseChain()
    if cfg is None:
        return chain

    n = len(cfg.blocks)
    ins: list[dict[str, frozenset[int]]] = [{} for _ in range(n)]
    entry_defs = {p: frozenset([PARAM_DEF]) for p in body.params}
    ins[cfg.entry] = dict(entry_defs)

    def transfer(block, reaching: dict[str, frozenset[int]]):
        out = dict(reaching)
        for stmt in block.stmts:
            name = stmt_def(stmt)
            if name is not None:
                out[name] = frozenset([stmt.stmt_id])
        return out

    changed = True
    while changed:
        changed = False
        for block in cfg.blocks:
            merged: dict[str, frozenset[int]] = (
                dict(entry_defs) if block.block_id == cfg.entry else {})
            for pred in block.predecessors:
                for name, defs in transfer(cfg.block(pred),
                                           ins[pred]).items():
                    merged[name] = merged.get(name, frozenset()) | defs
            if merged != ins[block.block_id]:
                ins[block.block_id] = merged
                changed = True

    local_names = set(body.locals())
    for block in cfg.blocks:
        reaching = dict(ins[block.block_id])
        for stmt in block.stmts:
            for name in stmt_reads_in(stmt, local_names):
                uses = chain.uses.setdefault(name, [])
                if not uses or uses[-1] != stmt.stmt_id:
                    uses.append(stmt.stmt_id)
                links = chain.links.setdefault(name, [])
                reached = sorted(reaching.get(name, ()))
                for def_id in reached:
                    if (def_id, stmt.stmt_id) not in links:
                        links.append((def_id, stmt.stmt_id))
                if not reached and not block.is_dead:
                    chain.diagnostics.append(warning(
                        path, stmt.span, MAYBE_UNDEFINED,
                        f"'{name}' may be used before it is assigned"))
            name = stmt_def(stmt)
            if name is not None:
                chain.defs.setdefault(name, []).append(stmt.stmt_id)
                reaching[name] = frozenset([stmt.stmt_id])
    for name in body.params:
        chain.defs.setdefault(name, []).insert(0, PARAM_DEF)
    body.def_use = chain
    return chain
