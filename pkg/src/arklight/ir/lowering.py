"""AST to three-address lowering.

Produces the pre-desugar statement stream: every expression is flattened so
that no Assign right-hand side nests a call, member access, index, or binary
operator inside another operator. Rules:

* operands of binary/unary expressions are materialized into ``temp%N``
  locals (member and index loads included);
* a call in nested-expression position gets a ``_ret%N`` result local, a
  statement-position call gets a ``temp%N`` result, and ``x = f(...)``
  assigns straight into ``x``;
* ``&&``/``||`` are short-circuit-lowered over a scratch local, so they never
  survive into the stream;
* structured control flow (if/while/for) stays structured here (IfS, WhileS,
  ForS) and is linearized to label/goto form later;
* increment/compound-assign statements, template strings, object/array
  literals, arrow/anonymous functions, and component blocks are carried as
  sugar forms for the desugar pass.

Generated names never collide with source locals: the counters start past
any source name that matches the generated patterns.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .. import astnodes as A
from ..astnodes import AstNode
from ..diagnostics import Diagnostic, Span, UNSUPPORTED_SYNTAX, error
from ..scenemodel import ClassSignature
from .model import (
    AnonFnValue,
    ArrayLitExpr,
    ArrayRef,
    Assign,
    BinaryExpr,
    ClassRef,
    ComponentStmt,
    CompoundAssign,
    Constant,
    FieldRef,
    ForS,
    IfS,
    IncDec,
    Invoke,
    Local,
    New,
    ObjectLitExpr,
    Return,
    TemplateExpr,
    ThisRef,
    UnaryExpr,
    WhileS,
)

_COMPARE_OPS = {"==", "!=", "===", "!==", "<", "<=", ">", ">=", "in", "instanceof"}
_TEMP_PATTERN = re.compile(r"^temp(\d+)$")
_RET_PATTERN = re.compile(r"^_ret(\d+)$")


@dataclass
class LoweringContext:
    """Per-method lowering state plus scene callbacks.

    ``resolve`` maps a bare identifier to a ClassSignature when it names a
    visible class (or a namespace's default class); ``has_constructor``
    reports whether `new Name()` should invoke a constructor.
    """

    path: str
    resolve: Callable[[str], ClassSignature | None]
    has_constructor: Callable[[str], bool]
    diagnostics: list[Diagnostic]
    declared: set[str] = dc_field(default_factory=set)
    source_locals: list[str] = dc_field(default_factory=list)
    declared_types: dict = dc_field(default_factory=dict)
    temp_counter: int = 0
    ret_counter: int = 0
    label_counter: int = 1

    def fresh_temp(self) -> Local:
        name = f"temp{self.temp_counter}"
        self.temp_counter += 1
        return Local(name)

    def fresh_ret(self) -> Local:
        name = f"_ret{self.ret_counter}"
        self.ret_counter += 1
        return Local(name)

    def fresh_label(self) -> str:
        name = f"label{self.label_counter}"
        self.label_counter += 1
        return name


def seed_counters(ctx: LoweringContext, param_names: list[str], body: AstNode | None) -> None:
    """Start generated-name counters past colliding source names."""
    names = set(param_names)
    if body is not None:
        for node in body.walk():
            if node.kind in (A.IDENTIFIER, A.VAR_DECL):
                names.add(node.attrs["name"])
    for name in names:
        m = _TEMP_PATTERN.match(name)
        if m:
            ctx.temp_counter = max(ctx.temp_counter, int(m.group(1)) + 1)
        m = _RET_PATTERN.match(name)
        if m:
            ctx.ret_counter = max(ctx.ret_counter, int(m.group(1)) + 1)


class Lowerer:
    def __init__(self, ctx: LoweringContext):
        self.ctx = ctx
        self._buffers: list[list] = [[]]

    # ----------------------------------------------------------- plumbing

    def emit(self, stmt) -> None:
        self._buffers[-1].append(stmt)

    def result(self) -> list:
        return self._buffers[0]

    def capture(self, fn: Callable[[], None]) -> list:
        self._buffers.append([])
        fn()
        return self._buffers.pop()

    def unsupported(self, span: Span, message: str) -> None:
        self.ctx.diagnostics.append(
            error(self.ctx.path, span, UNSUPPORTED_SYNTAX, message))

    # --------------------------------------------------------- statements

    def lower_block(self, block: AstNode) -> None:
        for stmt in block.children:
            self.lower_stmt(stmt)

    def lower_stmt(self, node: AstNode) -> None:
        kind = node.kind
        span = node.span
        if kind == A.VAR_DECL:
            name = node.attrs["name"]
            self.ctx.declared.add(name)
            if name not in self.ctx.source_locals:
                self.ctx.source_locals.append(name)
            if node.attrs.get("type") is not None:
                self.ctx.declared_types[name] = node.attrs["type"]
            init = node.attrs.get("init")
            if init is not None:
                self.lower_into(Local(name), init, span)
            else:
                self.emit(Assign(Local(name), Constant(None, "undefined"), span=span))
        elif kind == A.EXPR_STMT:
            self.lower_expr_statement(node.children[0], span)
        elif kind == A.ASSIGN:
            self.lower_assignment(node)
        elif kind == A.IF_STMT:
            self.lower_if(node)
        elif kind == A.WHILE_STMT:
            self.lower_while(node)
        elif kind == A.FOR_STMT:
            self.lower_for(node)
        elif kind == A.RETURN_STMT:
            value = None
            if node.children:
                value = self.lower_to_value(node.children[0])
            self.emit(Return(value, span=span))
        elif kind == A.BLOCK:
            self.lower_block(node)
        elif kind == A.COMPONENT_BLOCK:
            self.emit(self.component_stmt(node))
        elif kind == A.EMPTY_STMT:
            pass
        else:
            self.unsupported(span, f"statement kind {kind} is not supported here")

    def lower_expr_statement(self, expr: AstNode, span: Span) -> None:
        if expr.kind in (A.POSTFIX_UNARY, A.PREFIX_UNARY):
            target = self.lower_lvalue(expr.children[0])
            if target is not None:
                self.emit(IncDec(target, expr.attrs["op"], span=span))
            return
        if expr.kind == A.CALL:
            self.lower_call(expr, span, self.ctx.fresh_temp)
            return
        if expr.kind == A.NEW_EXPR:
            self.lower_new(expr, span, self.ctx.fresh_temp)
            return
        self.lower_to_value(expr)

    def lower_assignment(self, node: AstNode) -> None:
        lhs_ast, rhs_ast = node.children
        op = node.attrs["op"]
        span = node.span
        target = self.lower_lvalue(lhs_ast)
        if target is None:
            return
        if op == "=":
            self.lower_into(target, rhs_ast, span)
        else:
            value = self.lower_to_value(rhs_ast)
            self.emit(CompoundAssign(target, op, value, span=span))

    def lower_lvalue(self, node: AstNode):
        """Locals, field refs, and array refs; None after a diagnostic."""
        if node.kind == A.IDENTIFIER:
            name = node.attrs["name"]
            self.ctx.declared.add(name)
            if name not in self.ctx.source_locals:
                self.ctx.source_locals.append(name)
            return Local(name)
        if node.kind == A.MEMBER:
            base = self.lower_to_value(node.children[0])
            return FieldRef(base, node.attrs["name"])
        if node.kind == A.INDEX:
            base = self.as_local(self.lower_to_value(node.children[0]), node.span)
            index = self.lower_to_value(node.children[1])
            return ArrayRef(base, index)
        self.unsupported(node.span, "invalid assignment target")
        return None

    # ----------------------------------------------------- control flow

    def lower_cond(self, expr: AstNode) -> tuple[list, object]:
        """Returns (prep stmts, Cond) where Cond is a compare or a Value."""
        if expr.kind == A.BINARY and expr.attrs["op"] in _COMPARE_OPS:
            prep: list = []

            def run() -> None:
                left = self.lower_to_value(expr.children[0])
                right = self.lower_to_value(expr.children[1])
                cond_holder.append(BinaryExpr(expr.attrs["op"], left, right))

            cond_holder: list = []
            prep = self.capture(run)
            return prep, cond_holder[0]

        value_holder: list = []
        prep = self.capture(lambda: value_holder.append(self.lower_to_value(expr)))
        return prep, value_holder[0]

    def lower_if(self, node: AstNode) -> None:
        cond_ast = node.children[0]
        prep, cond = self.lower_cond(cond_ast)
        then_body = self.capture(lambda: self.lower_stmt(node.children[1]))
        else_body = []
        if len(node.children) > 2:
            else_body = self.capture(lambda: self.lower_stmt(node.children[2]))
        self.emit(IfS(prep, cond, then_body, else_body, span=node.span))

    def lower_while(self, node: AstNode) -> None:
        prep, cond = self.lower_cond(node.children[0])
        body = self.capture(lambda: self.lower_stmt(node.children[1]))
        self.emit(WhileS(prep, cond, body, span=node.span))

    def lower_for(self, node: AstNode) -> None:
        init = self.capture(lambda: [self.lower_stmt(s) for s in node.attrs["init"]])
        cond_ast = node.attrs.get("cond")
        if cond_ast is not None:
            prep, cond = self.lower_cond(cond_ast)
        else:
            prep, cond = [], Constant(True, "boolean")
        update = self.capture(lambda: [self.lower_stmt(s) for s in node.attrs["update"]])
        body = self.capture(lambda: self.lower_stmt(node.children[0]))
        self.emit(ForS(init, prep, cond, update, body, span=node.span))

    # ------------------------------------------------------- components

    def component_stmt(self, node: AstNode) -> ComponentStmt:
        children = [self.component_stmt(c) for c in node.children
                    if c.kind == A.COMPONENT_BLOCK]
        for c in node.children:
            if c.kind != A.COMPONENT_BLOCK:
                self.unsupported(c.span, "only component blocks may appear "
                                         "inside a component body")
        chains = [(chain.attrs["name"], chain.attrs["args"], chain.span)
                  for chain in node.attrs["chains"]]
        return ComponentStmt(name=node.attrs["name"], args_ast=node.attrs["args"],
                             children=children, chains=chains, span=node.span)

    # ------------------------------------------------------ expressions

    def lower_into(self, target, expr: AstNode, span: Span) -> None:
        """Lower expr so its result lands in target (Local gets the direct
        assignment privilege; field/array stores only take plain Values)."""
        direct = isinstance(target, Local)
        kind = expr.kind
        if direct and kind == A.CALL:
            self.lower_call(expr, span, lambda: target)
            return
        if direct and kind == A.NEW_EXPR:
            self.lower_new(expr, span, lambda: target)
            return
        if direct and kind == A.BINARY and expr.attrs["op"] not in ("&&", "||"):
            left = self.lower_to_value(expr.children[0])
            right = self.lower_to_value(expr.children[1])
            self.emit(Assign(target, BinaryExpr(expr.attrs["op"], left, right), span=span))
            return
        if direct and kind == A.UNARY:
            operand = self.lower_to_value(expr.children[0])
            self.emit(Assign(target, UnaryExpr(expr.attrs["op"], operand), span=span))
            return
        if direct and kind == A.MEMBER:
            base = self.lower_to_value(expr.children[0])
            self.emit(Assign(target, FieldRef(base, expr.attrs["name"]), span=span))
            return
        if direct and kind == A.INDEX:
            base = self.as_local(self.lower_to_value(expr.children[0]), expr.span)
            index = self.lower_to_value(expr.children[1])
            self.emit(Assign(target, ArrayRef(base, index), span=span))
            return
        if direct and kind == A.BINARY:  # && / ||
            self.lower_short_circuit(expr, target)
            return
        if direct and kind == A.TEMPLATE_STRING:
            self.emit(Assign(target, self.template_expr(expr), span=span))
            return
        if direct and kind == A.OBJECT_LITERAL:
            self.emit(Assign(target, self.object_expr(expr), span=span))
            return
        if direct and kind == A.ARRAY_LITERAL:
            self.emit(Assign(target, self.array_expr(expr), span=span))
            return
        if direct and kind in (A.ARROW_FN, A.ANON_FN):
            self.emit(Assign(target, AnonFnValue(expr), span=span))
            return
        value = self.lower_to_value(expr)
        self.emit(Assign(target, value, span=span))

    def lower_to_value(self, expr: AstNode):
        kind = expr.kind
        span = expr.span
        if kind == A.LITERAL:
            return Constant(expr.attrs["value"], expr.attrs["lit"])
        if kind == A.THIS_EXPR:
            return ThisRef()
        if kind == A.IDENTIFIER:
            name = expr.attrs["name"]
            if name in self.ctx.declared:
                return Local(name)
            sig = self.ctx.resolve(name)
            if sig is not None:
                return ClassRef(sig)
            return Local(name)
        if kind == A.MEMBER:
            base = self.lower_to_value(expr.children[0])
            temp = self.ctx.fresh_temp()
            self.emit(Assign(temp, FieldRef(base, expr.attrs["name"]), span=span))
            return temp
        if kind == A.INDEX:
            base = self.as_local(self.lower_to_value(expr.children[0]), span)
            index = self.lower_to_value(expr.children[1])
            temp = self.ctx.fresh_temp()
            self.emit(Assign(temp, ArrayRef(base, index), span=span))
            return temp
        if kind == A.CALL:
            return self.lower_call(expr, span, self.ctx.fresh_ret)
        if kind == A.NEW_EXPR:
            return self.lower_new(expr, span, self.ctx.fresh_temp)
        if kind == A.BINARY:
            op = expr.attrs["op"]
            if op in ("&&", "||"):
                scratch = self.ctx.fresh_temp()
                self.lower_short_circuit(expr, scratch)
                return scratch
            left = self.lower_to_value(expr.children[0])
            right = self.lower_to_value(expr.children[1])
            temp = self.ctx.fresh_temp()
            self.emit(Assign(temp, BinaryExpr(op, left, right), span=span))
            return temp
        if kind == A.UNARY:
            operand = self.lower_to_value(expr.children[0])
            temp = self.ctx.fresh_temp()
            self.emit(Assign(temp, UnaryExpr(expr.attrs["op"], operand), span=span))
            return temp
        if kind in (A.POSTFIX_UNARY, A.PREFIX_UNARY):
            self.unsupported(span, "increment operators are only supported "
                                   "in statement position")
            return self.lower_to_value(expr.children[0])
        if kind == A.TEMPLATE_STRING:
            rhs = self.template_expr(expr)
            temp = self.ctx.fresh_temp()
            self.emit(Assign(temp, rhs, span=span))
            return temp
        if kind == A.OBJECT_LITERAL:
            rhs = self.object_expr(expr)
            temp = self.ctx.fresh_temp()
            self.emit(Assign(temp, rhs, span=span))
            return temp
        if kind == A.ARRAY_LITERAL:
            rhs = self.array_expr(expr)
            temp = self.ctx.fresh_temp()
            self.emit(Assign(temp, rhs, span=span))
            return temp
        if kind in (A.ARROW_FN, A.ANON_FN):
            return AnonFnValue(expr)
        self.unsupported(span, f"expression kind {kind} is not supported")
        return Constant(None, "undefined")

    def as_local(self, value, span: Span) -> Local:
        if isinstance(value, Local):
            return value
        temp = self.ctx.fresh_temp()
        self.emit(Assign(temp, value, span=span))
        return temp

    def lower_short_circuit(self, expr: AstNode, scratch: Local) -> None:
        op = expr.attrs["op"]
        self.lower_into(scratch, expr.children[0], expr.span)
        branch = self.capture(
            lambda: self.lower_into(scratch, expr.children[1], expr.span))
        if op == "&&":
            self.emit(IfS([], scratch, branch, [], span=expr.span))
        else:
            self.emit(IfS([], scratch, [], branch, span=expr.span))

    def lower_call(self, expr: AstNode, span: Span,
                   make_result: Callable[[], Local]) -> Local:
        """Result locals are allocated after the operands are lowered so
        generated numbering follows emission order."""
        callee = expr.children[0]
        if callee.kind == A.IDENTIFIER:
            args = [self.lower_arg(a) for a in expr.children[1:]]
            result = make_result()
            self.emit(Invoke(callee.attrs["name"], args, base=None,
                             result=result, span=span))
            return result
        if callee.kind == A.MEMBER:
            base = self.lower_to_value(callee.children[0])
            if not isinstance(base, (Local, ThisRef, ClassRef)):
                base = self.as_local(base, span)
            args = [self.lower_arg(a) for a in expr.children[1:]]
            result = make_result()
            self.emit(Invoke(callee.attrs["name"], args, base=base,
                             result=result, span=span))
            return result
        self.unsupported(span, "unsupported call target")
        for arg in expr.children[1:]:
            self.lower_to_value(arg)
        result = make_result()
        self.emit(Assign(result, Constant(None, "undefined"), span=span))
        return result

    def lower_arg(self, expr: AstNode):
        # Anonymous functions pass through as placeholder values so the
        # hoisted name can be substituted in place (no extra copy temp).
        if expr.kind in (A.ARROW_FN, A.ANON_FN):
            return AnonFnValue(expr)
        return self.lower_to_value(expr)

    def lower_new(self, expr: AstNode, span: Span,
                  make_result: Callable[[], Local]) -> Local:
        name = expr.attrs["name"]
        # Arguments are evaluated before the allocation becomes visible;
        # without a declared constructor they are dropped after evaluation.
        args = [self.lower_arg(a) for a in expr.children]
        result = make_result()
        self.emit(New(result, name, span=span))
        if self.ctx.has_constructor(name):
            self.emit(Invoke("constructor", args, base=result, result=None,
                             is_ctor=True, span=span))
        return result

    def template_expr(self, expr: AstNode) -> TemplateExpr:
        parts = []
        for tag, payload in expr.attrs["parts"]:
            if tag == "text":
                parts.append(("text", payload))
            else:
                parts.append(("val", self.lower_to_value(payload)))
        return TemplateExpr(tuple(parts))

    def object_expr(self, expr: AstNode) -> ObjectLitExpr:
        pairs = []
        for prop in expr.children:
            value = self.lower_to_value(prop.children[0])
            pairs.append((prop.attrs["name"], value))
        return ObjectLitExpr(tuple(pairs))

    def array_expr(self, expr: AstNode) -> ArrayLitExpr:
        return ArrayLitExpr(tuple(self.lower_to_value(e) for e in expr.children))


def lower_method(param_names: list[str], body: AstNode | None,
                 ctx: LoweringContext) -> list:
    """Lower a method/function body into the pre-desugar statement stream."""
    ctx.declared.update(param_names)
    seed_counters(ctx, param_names, body)
    lowerer = Lowerer(ctx)
    if body is not None:
        lowerer.lower_block(body)
    return lowerer._buffers[0]
