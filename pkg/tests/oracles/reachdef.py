"""Brute-force reaching-definition links for one lowered body.

For every definition, walks the statement-level graph forward and records
each use found before an intervening redefinition. Dead blocks participate,
matching the analyzed semantics. Quadratic and proud of it.
"""

from __future__ import annotations

from arklight.augment.defuse import PARAM_DEF, stmt_def, stmt_reads_in


def _stmt_graph(cfg):
    succ: dict[int, list[int]] = {}
    stmt_by_id: dict[int, object] = {}
    for block in cfg.blocks:
        for i, stmt in enumerate(block.stmts):
            stmt_by_id[stmt.stmt_id] = stmt
            if i + 1 < len(block.stmts):
                succ[stmt.stmt_id] = [block.stmts[i + 1].stmt_id]
            else:
                succ[stmt.stmt_id] = [
                    cfg.block(b).stmts[0].stmt_id
                    for b in block.successors
                    if cfg.block(b).stmts
                ]
    return succ, stmt_by_id


def oracle_links(body) -> dict[str, set[tuple[int, int]]]:
    """name -> {(def stmt id | PARAM_DEF, use stmt id)} by path search."""
    cfg = body.cfg
    out: dict[str, set[tuple[int, int]]] = {}
    if cfg is None:
        return out
    succ, stmt_by_id = _stmt_graph(cfg)
    local_names = set(body.locals())

    def sweep(name: str, def_id: int, frontier: list[int]):
        seen = set()
        work = list(frontier)
        while work:
            sid = work.pop()
            if sid in seen:
                continue
            seen.add(sid)
            stmt = stmt_by_id[sid]
            if name in stmt_reads_in(stmt, local_names):
                out.setdefault(name, set()).add((def_id, sid))
            if stmt_def(stmt) == name:
                continue
            work.extend(succ.get(sid, ()))

    entry_block = cfg.block(cfg.entry)
    entry_ids = [entry_block.stmts[0].stmt_id] if entry_block.stmts else []
    for name in body.params:
        sweep(name, PARAM_DEF, entry_ids)
    for sid, stmt in stmt_by_id.items():
        name = stmt_def(stmt)
        if name is not None:
            sweep(name, sid, succ.get(sid, ()))
    return out
