"""Text rendering for method bodies.

Final form (post-desugar) prints one block per label-free basic block with
branch targets shown as block ids:

    method app.ets: %dflt.main/0 {
      bb0: // preds: none
        temp0 = console.log(x)
        return
    }

The original (pre-desugar) form renders structured statements nested, with
loop-head preparation statements under a ``head:`` marker so evaluation
order stays visible.
"""

from __future__ import annotations

from .. import astnodes as A
from .model import (
    Assign,
    BinaryExpr,
    Cfg,
    ComponentStmt,
    ForS,
    Goto,
    If,
    IfS,
    IncDec,
    Invoke,
    New,
    Nop,
    Return,
    WhileS,
    CompoundAssign,
)

HEADER = "// arklight-ir v1"


def _cond_text(cond) -> str:
    if isinstance(cond, BinaryExpr):
        return f"{cond.left.render()} {cond.op} {cond.right.render()}"
    return cond.render()


def _invoke_text(stmt: Invoke) -> str:
    args = ", ".join(a.render() for a in stmt.args)
    callee = f"{stmt.base.render()}.{stmt.callee}" if stmt.base is not None else stmt.callee
    call = f"{callee}({args})"
    if stmt.result is not None:
        return f"{stmt.result.render()} = {call}"
    return call


def _stmt_text(stmt, block_targets=None) -> str:
    if isinstance(stmt, If) and block_targets is not None:
        then_id, else_id = block_targets
        return f"if {_cond_text(stmt.cond)} goto bb{then_id} else bb{else_id}"
    if isinstance(stmt, Goto) and block_targets is not None:
        return f"goto bb{block_targets[0]}"
    if isinstance(stmt, Invoke):
        return _invoke_text(stmt)
    return stmt.render()


def _ast_text(node) -> str:
    """Compact source-like spelling of component argument expressions."""
    kind = node.kind
    if kind == A.IDENTIFIER:
        return node.attrs["name"]
    if kind == A.LITERAL:
        value = node.attrs["value"]
        if node.attrs["lit"] == "string":
            return "'" + str(value) + "'"
        if node.attrs["lit"] == "boolean":
            return "true" if value else "false"
        if node.attrs["lit"] in ("null", "undefined"):
            return node.attrs["lit"]
        if isinstance(value, float) and value.is_integer():
            return str(int(value))
        return str(value)
    if kind == A.THIS_EXPR:
        return "this"
    if kind == A.MEMBER:
        return f"{_ast_text(node.children[0])}.{node.attrs['name']}"
    if kind == A.INDEX:
        return f"{_ast_text(node.children[0])}[{_ast_text(node.children[1])}]"
    if kind == A.CALL:
        args = ", ".join(_ast_text(a) for a in node.children[1:])
        return f"{_ast_text(node.children[0])}({args})"
    if kind == A.BINARY:
        return (f"{_ast_text(node.children[0])} {node.attrs['op']} "
                f"{_ast_text(node.children[1])}")
    if kind == A.UNARY:
        return f"{node.attrs['op']}{_ast_text(node.children[0])}"
    if kind == A.TEMPLATE_STRING:
        return "`...`"
    if kind in (A.ARROW_FN, A.ANON_FN):
        return "<function>"
    return "<expr>"


def _structured_lines(stmts: list, indent: str, out: list[str]) -> None:
    for stmt in stmts:
        if isinstance(stmt, IfS):
            _structured_lines(stmt.prep, indent, out)
            out.append(f"{indent}if {_cond_text(stmt.cond)} {{")
            _structured_lines(stmt.then_body, indent + "  ", out)
            if stmt.else_body:
                out.append(f"{indent}}} else {{")
                _structured_lines(stmt.else_body, indent + "  ", out)
            out.append(f"{indent}}}")
        elif isinstance(stmt, WhileS):
            out.append(f"{indent}while {_cond_text(stmt.cond)} {{")
            if stmt.prep:
                out.append(f"{indent}  head:")
                _structured_lines(stmt.prep, indent + "    ", out)
            _structured_lines(stmt.body, indent + "  ", out)
            out.append(f"{indent}}}")
        elif isinstance(stmt, ForS):
            _structured_lines(stmt.init, indent, out)
            out.append(f"{indent}for {_cond_text(stmt.cond)} {{")
            if stmt.prep:
                out.append(f"{indent}  head:")
                _structured_lines(stmt.prep, indent + "    ", out)
            _structured_lines(stmt.body, indent + "  ", out)
            if stmt.update:
                out.append(f"{indent}  update:")
                _structured_lines(stmt.update, indent + "    ", out)
            out.append(f"{indent}}}")
        elif isinstance(stmt, ComponentStmt):
            args = ", ".join(_ast_text(a) for a in stmt.args_ast)
            chains = stmt.chains or []
            if chains or stmt.children:
                out.append(f"{indent}component {stmt.name}({args}) {{")
                for name, chain_args, _span in chains:
                    rendered = ", ".join(_ast_text(a) for a in chain_args)
                    out.append(f"{indent}  .{name}({rendered})")
                _structured_lines(stmt.children, indent + "  ", out)
                out.append(f"{indent}}}")
            else:
                out.append(f"{indent}component {stmt.name}({args})")
        else:
            out.append(f"{indent}{_stmt_text(stmt)}")


def dump_method(title: str, cfg: Cfg, original: bool = False) -> str:
    lines = [f"method {title} {{"]
    if original:
        _structured_lines(cfg.blocks[0].stmts, "  ", lines)
    else:
        for block in cfg.blocks:
            preds = ", ".join(f"bb{p}" for p in sorted(block.predecessors)) or "none"
            dead = " [dead]" if block.is_dead else ""
            lines.append(f"  bb{block.block_id}: // preds: {preds}{dead}")
            for stmt in block.stmts:
                targets = None
                if isinstance(stmt, (If, Goto)) and stmt is block.stmts[-1]:
                    targets = block.successors
                lines.append(f"    {_stmt_text(stmt, targets)}")
    lines.append("}")
    return "\n".join(lines)


def dump_ir(methods: list[tuple[str, Cfg]], original: bool = False) -> str:
    """Render many methods under the format header; callers pass them in
    the order they should appear (stable sorted by signature)."""
    chunks = [HEADER]
    for title, cfg in methods:
        chunks.append(dump_method(title, cfg, original=original))
    return "\n\n".join(chunks) + "\n"


def dump_body(body) -> str:
    """Both views of one lowered body: source-shaped stream, then core CFG."""
    title = body.signature.text()
    chunks = [HEADER]
    if body.original_cfg is not None:
        chunks.append(dump_method(title + " [original]", body.original_cfg,
                                  original=True))
    if body.cfg is not None:
        chunks.append(dump_method(title, body.cfg))
    return "\n\n".join(chunks) + "\n"
