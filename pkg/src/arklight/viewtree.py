"""Component-tree extraction for struct classes.

The tree mirrors the ComponentBlock nesting of the build method, including
components that only appear under a conditional or loop (they belong to the
level where they occur). State bindings are syntactic: a node binds every
@State field of the owning struct that is read as ``this.<field>`` inside
the component's arguments or chained calls, excluding reads inside event
handler functions (a handler mutates state, it does not bind the view).
"""

from __future__ import annotations

from typing import Callable

from . import astnodes as A
from .diagnostics import ViewTreeError
from .ir.model import ComponentStmt, ForS, IfS, WhileS
from .scenemodel import ArkClass, ViewNode, ViewTree

SYNTHETIC_ROOT = "%root"


def _state_reads(node, state_fields: set[str], out: list[str]) -> None:
    if node.kind in (A.ARROW_FN, A.ANON_FN):
        return
    if (node.kind == A.MEMBER and node.children
            and node.children[0].kind == A.THIS_EXPR
            and node.attrs["name"] in state_fields):
        if node.attrs["name"] not in out:
            out.append(node.attrs["name"])
    for child in node.children:
        _state_reads(child, state_fields, out)
    for key in sorted(node.attrs):
        value = node.attrs[key]
        items = value if isinstance(value, (list, tuple)) else [value]
        for item in items:
            if isinstance(item, A.AstNode):
                _state_reads(item, state_fields, out)
            elif isinstance(item, tuple):
                for sub in item:
                    if isinstance(sub, A.AstNode):
                        _state_reads(sub, state_fields, out)


def _collect(stmts: list, state_fields: set[str],
             classify: Callable[[str], tuple[str, object]],
             out: list[ViewNode]) -> None:
    for stmt in stmts:
        if isinstance(stmt, ComponentStmt):
            bindings: list[str] = []
            for arg in stmt.args_ast:
                _state_reads(arg, state_fields, bindings)
            for _name, chain_args, _span in stmt.chains:
                for arg in chain_args:
                    _state_reads(arg, state_fields, bindings)
            kind, ref = classify(stmt.name)
            node = ViewNode(stmt.name, kind, bindings,
                            custom_class=ref if kind == "custom" else None)
            _collect(stmt.children, state_fields, classify, node.children)
            out.append(node)
        elif isinstance(stmt, IfS):
            _collect(stmt.then_body, state_fields, classify, out)
            _collect(stmt.else_body, state_fields, classify, out)
        elif isinstance(stmt, WhileS):
            _collect(stmt.body, state_fields, classify, out)
        elif isinstance(stmt, ForS):
            _collect(stmt.body, state_fields, classify, out)


def build_view_tree(struct: ArkClass,
                    classify: Callable[[str], tuple[str, object]] | None = None
                    ) -> ViewTree:
    """Build the component tree of a struct's build method.

    ``classify`` maps a component name to ("system"|"custom", class
    signature or None); without it every component is reported as system.
    """
    build = struct.find_method("build")
    if build is None or build.body is None:
        raise ViewTreeError(
            f"{struct.signature.text()} has no build method to derive a view tree from")
    if classify is None:
        classify = lambda name: ("system", None)
    state_fields = {f.name for f in struct.fields if f.has_decorator("State")}
    top: list[ViewNode] = []
    _collect(build.body.original_cfg.blocks[0].stmts, state_fields, classify, top)
    if len(top) == 1:
        root = top[0]
    else:
        root = ViewNode(SYNTHETIC_ROOT, "system", [], children=top)
    return ViewTree(root, struct.signature)
