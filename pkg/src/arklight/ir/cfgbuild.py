"""Basic-block construction over core statement streams.

Classic leader algorithm: the first statement, every branch target, and
every statement after a branch or return starts a block. Label statements
are dissolved; branch targets are recorded as ordered successor edges
(then first, else second), so printers render targets as block ids.
Blocks unreachable from the entry stay in the graph flagged dead.

``linearize`` wraps the pre-desugar stream in a single-block graph with the
structured statements kept intact (the printer renders their bodies nested);
no labels exist before the desugarer allocates them, so there is nothing to
partition yet.
"""

from __future__ import annotations

from ..diagnostics import CfgError
from .model import BasicBlock, Cfg, Goto, If, Label, Return


def build_cfg(stmts: list) -> Cfg:
    """Partition a flat core stream into basic blocks with ordered edges."""
    labels: dict[str, int] = {}
    real: list = []
    for stmt in stmts:
        if isinstance(stmt, Label):
            if stmt.name in labels:
                raise CfgError(f"label '{stmt.name}' is defined twice")
            labels[stmt.name] = len(real)
        else:
            real.append(stmt)
    for stmt in stmts:
        if isinstance(stmt, Label) and labels[stmt.name] >= len(real):
            raise CfgError(f"label '{stmt.name}' has no following statement")

    def target(name: str) -> int:
        if name not in labels:
            raise CfgError(f"branch to undefined label '{name}'")
        return labels[name]

    leaders = {0} if real else set()
    for i, stmt in enumerate(real):
        if isinstance(stmt, If):
            leaders.add(target(stmt.then_label))
            leaders.add(target(stmt.else_label))
            leaders.add(i + 1)
        elif isinstance(stmt, Goto):
            leaders.add(target(stmt.label))
            leaders.add(i + 1)
        elif isinstance(stmt, Return):
            leaders.add(i + 1)
    leaders.discard(len(real))

    starts = sorted(leaders)
    block_of_stmt: dict[int, int] = {}
    blocks: list[BasicBlock] = []
    for block_id, start in enumerate(starts):
        end = starts[block_id + 1] if block_id + 1 < len(starts) else len(real)
        blocks.append(BasicBlock(block_id, real[start:end]))
        for i in range(start, end):
            block_of_stmt[i] = block_id

    for block_id, start in enumerate(starts):
        block = blocks[block_id]
        last = block.stmts[-1]
        end = start + len(block.stmts)
        if isinstance(last, If):
            block.successors = [block_of_stmt[target(last.then_label)],
                                block_of_stmt[target(last.else_label)]]
        elif isinstance(last, Goto):
            block.successors = [block_of_stmt[target(last.label)]]
        elif isinstance(last, Return):
            block.successors = []
        elif end < len(real):
            block.successors = [block_of_stmt[end]]
        else:
            block.successors = []

    for block in blocks:
        for succ in block.successors:
            if block.block_id not in blocks[succ].predecessors:
                blocks[succ].predecessors.append(block.block_id)

    reachable = set()
    work = [0] if blocks else []
    while work:
        bid = work.pop()
        if bid in reachable:
            continue
        reachable.add(bid)
        work.extend(blocks[bid].successors)
    for block in blocks:
        block.is_dead = block.block_id not in reachable

    cfg = Cfg(blocks=blocks, entry=0)
    next_id = 0
    for block in blocks:
        for pos, stmt in enumerate(block.stmts):
            stmt.stmt_id = next_id
            cfg.stmt_index[next_id] = (block.block_id, pos)
            next_id += 1
    return cfg


def linearize(stmts: list) -> Cfg:
    """Single-block view of the pre-desugar stream (sugar kept nested)."""
    flat = list(stmts)
    if not flat or not isinstance(flat[-1], (Return, Goto)):
        span = flat[-1].span if flat else None
        flat.append(Return(None) if span is None else Return(None, span=span))
    block = BasicBlock(0, flat)
    cfg = Cfg(blocks=[block], entry=0)
    for pos, stmt in enumerate(flat):
        stmt.stmt_id = pos
        cfg.stmt_index[pos] = (0, pos)
    return cfg
