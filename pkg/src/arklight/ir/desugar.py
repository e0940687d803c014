"""Sugar elimination over the lowered statement stream.

Takes the structured/pre-desugar stream and produces the final core IR:

* ``i++`` / ``i -= 2`` become plain loads, a binary op, and a store back;
* template strings fold right-to-left into ``+`` concatenations;
* arrow and anonymous function values are hoisted into named methods
  (``Anonymous_%N``) on the file's default class, with captured locals
  appended as trailing parameters;
* object literals become a synthesized class, a ``new``, and field stores;
  array literals become ``new Array`` plus indexed stores;
* if/else, while, and for are flattened to label/goto form (labels are
  numbered ``label1..N`` per method in source order, outermost first);
* component blocks expand to ``create`` / chained configuration calls on the
  create result / child expansion / ``pop``.

The pass is idempotent on streams that already contain only core statements.
Hoisted function bodies are not lowered here; the scene builder drains the
queue so file-level naming stays coordinated.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

from .. import astnodes as A
from ..diagnostics import (
    CAPTURE_UNSUPPORTED,
    Diagnostic,
    Span,
    UNKNOWN_COMPONENT,
    warning,
)
from ..scenemodel import ClassSignature
from .lowering import Lowerer, LoweringContext
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
    FuncRef,
    Goto,
    If,
    IfS,
    IncDec,
    Invoke,
    Label,
    Local,
    New,
    Nop,
    ObjectLitExpr,
    Return,
    TemplateExpr,
    UnaryExpr,
    WhileS,
)


@dataclass
class DesugarHooks:
    """Scene-side services the desugarer needs.

    fresh_anon        -> next per-file synthetic name ("Anonymous_%N")
    hoist_function    (name, fn ast, captured locals, uses_this) registers a
                      pending method on the owning class; this-using
                      functions become instance methods so `this` stays
                      meaningful
    synth_object_class(name, field names, span) registers the class backing
                      an object literal
    component_info    (component name) -> ("system", builder signature) |
                      ("custom", struct class name) | ("unknown", builder
                      signature of a freshly synthesized stub)
    outer_env         locals of the hoist origin, for flagging captures that
                      would have to cross two function boundaries
    """

    fresh_anon: Callable[[], str]
    hoist_function: Callable[[str, object, list[str], bool], None]
    synth_object_class: Callable[[str, list[str], Span], None]
    component_info: Callable[[str], tuple[str, object]]
    outer_env: frozenset = frozenset()


_ONE = Constant(1, "number")


class Desugarer:
    def __init__(self, ctx: LoweringContext, hooks: DesugarHooks,
                 path: str, diagnostics: list[Diagnostic]):
        self.ctx = ctx
        self.hooks = hooks
        self.path = path
        self.diagnostics = diagnostics
        # local name -> hoisted function it currently holds, tracked
        # flow-insensitively so direct calls get capture params appended
        self.func_locals: dict[str, str] = {}
        self.capture_params: dict[str, list[str]] = {}

    # ------------------------------------------------------------- driver

    def run(self, stmts: list) -> list:
        out = self.walk(stmts)
        if not out or not isinstance(out[-1], (Return, Goto)):
            out.append(Return(None, span=out[-1].span if out else Span.point(1, 1)))
        return out

    def walk(self, stmts: list) -> list:
        out: list = []
        for stmt in stmts:
            self.stmt(stmt, out)
        return out

    def stmt(self, stmt, out: list) -> None:
        if isinstance(stmt, Assign):
            self.assign(stmt, out)
        elif isinstance(stmt, Invoke):
            stmt.args = [self.fix_value(a) for a in stmt.args]
            self.rewrite_call(stmt)
            self.check_escapes(stmt.args, stmt.span)
            if isinstance(stmt.result, Local):
                self.func_locals.pop(stmt.result.name, None)
            out.append(stmt)
        elif isinstance(stmt, Return):
            if stmt.value is not None:
                stmt.value = self.fix_value(stmt.value)
                self.check_escapes([stmt.value], stmt.span)
            out.append(stmt)
        elif isinstance(stmt, (New, If, Goto, Label, Nop)):
            out.append(stmt)
        elif isinstance(stmt, IncDec):
            self.inc_dec(stmt, out)
        elif isinstance(stmt, CompoundAssign):
            self.compound(stmt, out)
        elif isinstance(stmt, IfS):
            self.flatten_if(stmt, out)
        elif isinstance(stmt, WhileS):
            self.flatten_while(stmt, out)
        elif isinstance(stmt, ForS):
            self.flatten_for(stmt, out)
        elif isinstance(stmt, ComponentStmt):
            self.component(stmt, out)
        else:  # pragma: no cover - model and dispatch move together
            raise TypeError(f"unexpected statement {type(stmt).__name__}")

    # ----------------------------------------------------------- assigns

    def assign(self, stmt: Assign, out: list) -> None:
        rhs = stmt.rhs
        span = stmt.span
        if isinstance(stmt.lhs, Local):
            self.func_locals.pop(stmt.lhs.name, None)
        if isinstance(rhs, TemplateExpr):
            self.expand_template(stmt.lhs, rhs, span, out)
        elif isinstance(rhs, ObjectLitExpr):
            self.expand_object(stmt.lhs, rhs, span, out)
        elif isinstance(rhs, ArrayLitExpr):
            self.expand_array(stmt.lhs, rhs, span, out)
        elif isinstance(rhs, BinaryExpr):
            stmt.rhs = BinaryExpr(rhs.op, self.fix_value(rhs.left),
                                  self.fix_value(rhs.right))
            out.append(stmt)
        elif isinstance(rhs, UnaryExpr):
            stmt.rhs = UnaryExpr(rhs.op, self.fix_value(rhs.operand))
            out.append(stmt)
        else:
            stmt.rhs = self.fix_value(rhs)
            if isinstance(stmt.rhs, FuncRef):
                if isinstance(stmt.lhs, Local):
                    self.func_locals[stmt.lhs.name] = stmt.rhs.name
                else:
                    self.check_escapes([stmt.rhs], span)
            out.append(stmt)

    def store_target(self, lhs, span: Span, out: list):
        """Expansions write into a Local; indirect targets get a temp that
        is stored back by the caller."""
        if isinstance(lhs, Local):
            return lhs, False
        return self.ctx.fresh_temp(), True

    def expand_template(self, lhs, tpl: TemplateExpr, span: Span, out: list) -> None:
        target, indirect = self.store_target(lhs, span, out)
        parts = list(tpl.parts)
        if not parts:
            out.append(Assign(target, Constant("", "string"), span=span))
        else:
            if all(tag != "text" for tag, _ in parts):
                parts.insert(0, ("text", ""))
            values = [Constant(p, "string") if tag == "text" else self.fix_value(p)
                      for tag, p in parts]
            if len(values) == 1:
                out.append(Assign(target, values[0], span=span))
            else:
                acc = values[-1]
                for value in reversed(values[1:-1]):
                    temp = self.ctx.fresh_temp()
                    out.append(Assign(temp, BinaryExpr("+", value, acc), span=span))
                    acc = temp
                out.append(Assign(target, BinaryExpr("+", values[0], acc), span=span))
        if indirect:
            out.append(Assign(lhs, target, span=span))

    def expand_object(self, lhs, lit: ObjectLitExpr, span: Span, out: list) -> None:
        target, indirect = self.store_target(lhs, span, out)
        class_name = self.hooks.fresh_anon()
        self.hooks.synth_object_class(class_name, [name for name, _ in lit.pairs], span)
        out.append(New(target, class_name, span=span))
        for name, value in lit.pairs:
            out.append(Assign(FieldRef(target, name), self.fix_value(value), span=span))
        if indirect:
            out.append(Assign(lhs, target, span=span))

    def expand_array(self, lhs, lit: ArrayLitExpr, span: Span, out: list) -> None:
        target, indirect = self.store_target(lhs, span, out)
        out.append(New(target, "Array", span=span))
        for i, element in enumerate(lit.elements):
            out.append(Assign(ArrayRef(target, Constant(i, "number")),
                              self.fix_value(element), span=span))
        if indirect:
            out.append(Assign(lhs, target, span=span))

    # --------------------------------------------- increments, compounds

    def inc_dec(self, stmt: IncDec, out: list) -> None:
        op = "+" if stmt.op == "++" else "-"
        span = stmt.span
        if isinstance(stmt.lhs, Local):
            out.append(Assign(stmt.lhs, BinaryExpr(op, stmt.lhs, _ONE), span=span))
            return
        loaded = self.ctx.fresh_temp()
        out.append(Assign(loaded, stmt.lhs, span=span))
        bumped = self.ctx.fresh_temp()
        out.append(Assign(bumped, BinaryExpr(op, loaded, _ONE), span=span))
        out.append(Assign(stmt.lhs, bumped, span=span))

    def compound(self, stmt: CompoundAssign, out: list) -> None:
        op = stmt.op[0]
        span = stmt.span
        rhs = self.fix_value(stmt.rhs)
        if isinstance(stmt.lhs, Local):
            out.append(Assign(stmt.lhs, BinaryExpr(op, stmt.lhs, rhs), span=span))
            return
        loaded = self.ctx.fresh_temp()
        out.append(Assign(loaded, stmt.lhs, span=span))
        combined = self.ctx.fresh_temp()
        out.append(Assign(combined, BinaryExpr(op, loaded, rhs), span=span))
        out.append(Assign(stmt.lhs, combined, span=span))

    # ------------------------------------------------------ control flow

    def fix_cond(self, cond):
        if isinstance(cond, BinaryExpr):
            return BinaryExpr(cond.op, self.fix_value(cond.left),
                              self.fix_value(cond.right))
        return self.fix_value(cond)

    def ends_control(self, body: list) -> bool:
        return bool(body) and isinstance(body[-1], (Return, Goto))

    def flatten_if(self, stmt: IfS, out: list) -> None:
        span = stmt.span
        out.extend(self.walk(stmt.prep))
        cond = self.fix_cond(stmt.cond)
        then_label = self.ctx.fresh_label()
        else_label = self.ctx.fresh_label()
        join_label = self.ctx.fresh_label() if stmt.else_body else else_label
        out.append(If(cond, then_label, else_label, span=span))
        out.append(Label(then_label, span=span))
        then_body = self.walk(stmt.then_body)
        out.extend(then_body)
        if stmt.else_body:
            if not self.ends_control(then_body):
                out.append(Goto(join_label, span=span))
            out.append(Label(else_label, span=span))
            out.extend(self.walk(stmt.else_body))
        out.append(Label(join_label, span=span))

    def flatten_while(self, stmt: WhileS, out: list) -> None:
        span = stmt.span
        head = self.ctx.fresh_label()
        body_label = self.ctx.fresh_label()
        exit_label = self.ctx.fresh_label()
        out.append(Label(head, span=span))
        out.extend(self.walk(stmt.prep))
        out.append(If(self.fix_cond(stmt.cond), body_label, exit_label, span=span))
        out.append(Label(body_label, span=span))
        body = self.walk(stmt.body)
        out.extend(body)
        if not self.ends_control(body):
            out.append(Goto(head, span=span))
        out.append(Label(exit_label, span=span))

    def flatten_for(self, stmt: ForS, out: list) -> None:
        span = stmt.span
        out.extend(self.walk(stmt.init))
        head = self.ctx.fresh_label()
        body_label = self.ctx.fresh_label()
        exit_label = self.ctx.fresh_label()
        out.append(Label(head, span=span))
        out.extend(self.walk(stmt.prep))
        out.append(If(self.fix_cond(stmt.cond), body_label, exit_label, span=span))
        out.append(Label(body_label, span=span))
        body = self.walk(stmt.body) + self.walk(stmt.update)
        out.extend(body)
        if not self.ends_control(body):
            out.append(Goto(head, span=span))
        out.append(Label(exit_label, span=span))

    # -------------------------------------------------------- components

    def component(self, stmt: ComponentStmt, out: list) -> None:
        span = stmt.span
        kind, ref = self.hooks.component_info(stmt.name)
        if kind == "unknown":
            self.diagnostics.append(warning(
                self.path, span, UNKNOWN_COMPONENT,
                f"unknown component '{stmt.name}'"))
        if kind == "custom":
            # A nested custom component is instantiated and built in place.
            args = self.lower_args(stmt.args_ast, out)
            instance = self.ctx.fresh_temp()
            out.append(New(instance, ref, span=span))
            if self.ctx.has_constructor(ref):
                out.append(Invoke("constructor", args, base=instance,
                                  result=None, is_ctor=True, span=span))
            for name, args_ast, chain_span in stmt.chains:
                chain_args = self.lower_args(args_ast, out)
                out.append(Invoke(name, chain_args, base=instance, result=None,
                                  span=chain_span))
            out.append(Invoke("build", [], base=instance, result=None, span=span))
            for child in stmt.children:
                self.component(child, out)
            return
        builder = ClassRef(ref)
        args = self.lower_args(stmt.args_ast, out)
        created = self.ctx.fresh_temp()
        out.append(Invoke("create", args, base=builder, result=created, span=span))
        for name, args_ast, chain_span in stmt.chains:
            chain_args = self.lower_args(args_ast, out)
            out.append(Invoke(name, chain_args, base=created, result=None,
                              span=chain_span))
        for child in stmt.children:
            self.component(child, out)
        out.append(Invoke("pop", [], base=builder, result=None, span=span))

    def lower_args(self, args_ast: list, out: list) -> list:
        """Lower component argument expressions in place; the prep lands
        right before the call that consumes the values."""
        lowerer = Lowerer(self.ctx)
        values: list = []
        prep = lowerer.capture(
            lambda: values.extend(lowerer.lower_arg(a) for a in args_ast))
        out.extend(self.walk(prep))
        return [self.fix_value(v) for v in values]

    # ------------------------------------------------- anonymous functions

    def fix_value(self, value):
        if isinstance(value, AnonFnValue):
            return self.hoist(value)
        if isinstance(value, FieldRef):
            return FieldRef(self.fix_value(value.base), value.field)
        if isinstance(value, ArrayRef):
            return ArrayRef(value.base, self.fix_value(value.index))
        return value

    def hoist(self, anon: AnonFnValue) -> FuncRef:
        fn_ast = anon.fn_ast
        captures, escapees, uses_this = self.capture_info(fn_ast)
        for name in escapees:
            self.diagnostics.append(warning(
                self.path, fn_ast.span, CAPTURE_UNSUPPORTED,
                f"'{name}' is captured across two function boundaries"
                " and is dropped"))
        name = self.hooks.fresh_anon()
        self.capture_params[name] = captures
        self.hooks.hoist_function(name, fn_ast, captures, uses_this)
        return FuncRef(name)

    def rewrite_call(self, stmt: Invoke) -> None:
        """Append capture params to direct calls through a tracked local."""
        if stmt.base is not None:
            return
        target = self.func_locals.get(stmt.callee)
        if target is None:
            return
        stmt.args.extend(Local(name) for name in self.capture_params.get(target, []))

    def check_escapes(self, values: list, span: Span) -> None:
        """A capturing function whose reference leaves the method has call
        sites we cannot rewrite; flag it."""
        for value in values:
            if isinstance(value, FuncRef):
                fn = value.name
            elif isinstance(value, Local):
                fn = self.func_locals.get(value.name)
            else:
                continue
            if fn is not None and self.capture_params.get(fn):
                captured = ", ".join(self.capture_params[fn])
                self.diagnostics.append(warning(
                    self.path, span, CAPTURE_UNSUPPORTED,
                    f"'{fn}' captures {captured}; indirect call"
                    " sites are not rewritten"))

    def capture_info(self, fn_ast) -> tuple[list[str], list[str], bool]:
        bound = {p.attrs["name"] for p in fn_ast.attrs["params"]}
        body = fn_ast.children[0]
        used: list[str] = []
        uses_this = False
        for node in body.walk():
            if node.kind == A.VAR_DECL or node.kind == A.PARAM_DECL:
                bound.add(node.attrs["name"])
            elif node.kind == A.IDENTIFIER:
                used.append(node.attrs["name"])
            elif node.kind == A.THIS_EXPR:
                uses_this = True
        captures: list[str] = []
        escapees: list[str] = []
        for name in used:
            if name in bound or name in captures or name in escapees:
                continue
            if name in self.ctx.declared:
                captures.append(name)
            elif name in self.hooks.outer_env:
                escapees.append(name)
        return captures, escapees, uses_this


def desugar(stmts: list, ctx: LoweringContext, hooks: DesugarHooks,
            path: str, diagnostics: list[Diagnostic]) -> list:
    """Flatten a lowered statement stream into core IR statements."""
    return Desugarer(ctx, hooks, path, diagnostics).run(stmts)
