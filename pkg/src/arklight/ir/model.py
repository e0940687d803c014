"""IR value, statement, and control-flow-graph model.

The lowered form is a statement list in three-address shape: every Assign
right-hand side holds at most two operand Values, calls take Values as
arguments, and structured control flow exists only in the pre-desugar stream
(IfS/WhileS/ForS, removed by desugaring into label/goto form).

Two statement vocabularies share these classes:

* the *pre-desugar* stream may additionally contain sugar carriers
  (IncDec, CompoundAssign, TemplateExpr/ObjectLitExpr/ArrayLitExpr/AnonFnValue
  right-hand sides, ComponentStmt, and the structured IfS/WhileS/ForS);
* the *final* stream holds only Assign/Invoke/New/If/Goto/Return/Label/Nop.

``ArkBody`` keeps both CFGs: ``original_cfg`` is built right after lowering
(structured control flow linearized with implicit labels, sugar intact) and
``cfg`` after desugaring.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..diagnostics import Span
from ..scenemodel import ClassSignature, MethodSignature

# ----------------------------------------------------------------- values


@dataclass(frozen=True)
class Local:
    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class Constant:
    value: object
    kind: str  # number | string | boolean | null | undefined

    def render(self) -> str:
        if self.kind == "string":
            escaped = (str(self.value).replace("\\", "\\\\").replace("'", "\\'")
                       .replace("\n", "\\n").replace("\t", "\\t"))
            return f"'{escaped}'"
        if self.kind == "boolean":
            return "true" if self.value else "false"
        if self.kind in ("null", "undefined"):
            return self.kind
        if isinstance(self.value, float) and self.value.is_integer():
            return str(self.value)
        return str(self.value)


@dataclass(frozen=True)
class ThisRef:
    def render(self) -> str:
        return "this"


@dataclass(frozen=True)
class ClassRef:
    """Reference to a class (or namespace default class) by signature."""

    signature: ClassSignature

    def render(self) -> str:
        return ".".join(self.signature.namespace + (self.signature.name,))


@dataclass(frozen=True)
class FieldRef:
    base: object  # Local | ThisRef | ClassRef
    field: str

    def render(self) -> str:
        return f"{self.base.render()}.{self.field}"


@dataclass(frozen=True)
class ArrayRef:
    base: object  # Local
    index: object  # Value

    def render(self) -> str:
        return f"{self.base.render()}[{self.index.render()}]"


@dataclass(frozen=True)
class FuncRef:
    """Reference to a hoisted function by method name on the owning class."""

    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class AnonFnValue:
    """Pre-desugar placeholder for an arrow/anonymous function expression."""

    fn_ast: object
    def render(self) -> str:
        return "<fn>"


VALUE_TYPES = (Local, Constant, ThisRef, ClassRef, FieldRef, ArrayRef,
               FuncRef, AnonFnValue)

# ------------------------------------------------------------ expressions


@dataclass(frozen=True)
class BinaryExpr:
    op: str
    left: object
    right: object

    def render(self) -> str:
        return f"{self.left.render()} {self.op} {self.right.render()}"


@dataclass(frozen=True)
class UnaryExpr:
    op: str
    operand: object

    def render(self) -> str:
        return f"{self.op}{self.operand.render()}"


@dataclass(frozen=True)
class TemplateExpr:
    """Template string with pre-evaluated hole Values, desugared later."""

    parts: tuple  # of ("text", str) | ("val", Value)

    def render(self) -> str:
        bits = []
        for tag, payload in self.parts:
            bits.append(payload if tag == "text" else "${" + payload.render() + "}")
        return "`" + "".join(str(b) for b in bits) + "`"


@dataclass(frozen=True)
class ObjectLitExpr:
    pairs: tuple  # of (name, Value)

    def render(self) -> str:
        inner = ", ".join(f"{name}: {value.render()}" for name, value in self.pairs)
        return "{" + inner + "}"


@dataclass(frozen=True)
class ArrayLitExpr:
    elements: tuple

    def render(self) -> str:
        return "[" + ", ".join(v.render() for v in self.elements) + "]"


# -------------------------------------------------------------- statements


@dataclass
class Stmt:
    span: Span = dc_field(default=Span.point(1, 1), kw_only=True)
    stmt_id: int = dc_field(default=-1, kw_only=True)


@dataclass
class Assign(Stmt):
    lhs: object   # Local | FieldRef | ArrayRef
    rhs: object   # Value | BinaryExpr | UnaryExpr | sugar expr

    def render(self) -> str:
        return f"{self.lhs.render()} = {self.rhs.render()}"


@dataclass
class Invoke(Stmt):
    callee: str
    args: list = dc_field(default_factory=list)
    base: object | None = None       # Local | ThisRef | ClassRef | None
    result: Local | None = None
    is_ctor: bool = False

    def render(self) -> str:
        args = ", ".join(a.render() for a in self.args)
        call = f"{self.base.render()}.{self.callee}({args})" if self.base is not None \
            else f"{self.callee}({args})"
        return f"{self.result.render()} = {call}" if self.result is not None else call


@dataclass
class New(Stmt):
    result: Local
    class_name: str

    def render(self) -> str:
        return f"{self.result.render()} = new {self.class_name}()"


@dataclass
class If(Stmt):
    cond: object                     # Value | BinaryExpr (comparison)
    then_label: str
    else_label: str

    def render(self) -> str:
        return f"if {self.cond.render()} goto {self.then_label} else {self.else_label}"


@dataclass
class Goto(Stmt):
    label: str

    def render(self) -> str:
        return f"goto {self.label}"


@dataclass
class Return(Stmt):
    value: object | None = None

    def render(self) -> str:
        return f"return {self.value.render()}" if self.value is not None else "return"


@dataclass
class Label(Stmt):
    name: str

    def render(self) -> str:
        return f"{self.name}:"


@dataclass
class Nop(Stmt):
    def render(self) -> str:
        return "nop"


# Sugar statements present only before desugaring.


@dataclass
class IncDec(Stmt):
    lhs: object
    op: str  # '++' | '--'

    def render(self) -> str:
        return f"{self.lhs.render()}{self.op}"


@dataclass
class CompoundAssign(Stmt):
    lhs: object
    op: str   # '+=', '-=', '*=', '/=', '%='
    rhs: object

    def render(self) -> str:
        return f"{self.lhs.render()} {self.op} {self.rhs.render()}"


@dataclass
class IfS(Stmt):
    prep: list = dc_field(default_factory=list)
    cond: object = None
    then_body: list = dc_field(default_factory=list)
    else_body: list = dc_field(default_factory=list)


@dataclass
class WhileS(Stmt):
    prep: list = dc_field(default_factory=list)
    cond: object = None
    body: list = dc_field(default_factory=list)


@dataclass
class ForS(Stmt):
    init: list = dc_field(default_factory=list)
    prep: list = dc_field(default_factory=list)
    cond: object = None
    update: list = dc_field(default_factory=list)
    body: list = dc_field(default_factory=list)


@dataclass
class ComponentStmt(Stmt):
    name: str = ""
    args_ast: list = dc_field(default_factory=list)      # AST expressions
    children: list = dc_field(default_factory=list)      # ComponentStmt list
    chains: list = dc_field(default_factory=list)        # (name, args_ast, span)


CORE_STMTS = (Assign, Invoke, New, If, Goto, Return, Label, Nop)

# ---------------------------------------------------------------- the CFG


@dataclass
class BasicBlock:
    block_id: int
    stmts: list = dc_field(default_factory=list)
    successors: list[int] = dc_field(default_factory=list)
    predecessors: list[int] = dc_field(default_factory=list)
    is_dead: bool = False


@dataclass
class Cfg:
    blocks: list[BasicBlock] = dc_field(default_factory=list)
    entry: int = 0
    # stmt id -> (block id, offset inside block)
    stmt_index: dict[int, tuple[int, int]] = dc_field(default_factory=dict)

    def block(self, block_id: int) -> BasicBlock:
        return self.blocks[block_id]

    def stmts(self):
        for block in self.blocks:
            yield from block.stmts

    def stmt_at(self, stmt_id: int):
        block_id, offset = self.stmt_index[stmt_id]
        return self.blocks[block_id].stmts[offset]

    def stmt_count(self) -> int:
        return len(self.stmt_index)


@dataclass
class ArkBody:
    signature: MethodSignature
    original_cfg: Cfg | None = None
    cfg: Cfg | None = None
    params: list[str] = dc_field(default_factory=list)
    source_locals: list[str] = dc_field(default_factory=list)
    declared_types: dict = dc_field(default_factory=dict)   # local -> TypeAnno
    def_use: object = None          # DefUseChain, attached by the augment pass
    inferred_types: dict | None = None

    def locals(self) -> list[str]:
        """Every Local name appearing in the final CFG, params included."""
        seen: list[str] = []
        seen_set: set[str] = set()
        for name in self.params:
            if name not in seen_set:
                seen.append(name)
                seen_set.add(name)
        for stmt in self.cfg.stmts() if self.cfg else ():
            for value in stmt_values(stmt):
                if isinstance(value, Local) and value.name not in seen_set:
                    seen.append(value.name)
                    seen_set.add(value.name)
        return seen


def expr_values(expr) -> list:
    """Operand Values of an expression or value (includes nested bases)."""
    out = []
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, BinaryExpr):
            stack.extend((node.right, node.left))
        elif isinstance(node, UnaryExpr):
            stack.append(node.operand)
        elif isinstance(node, TemplateExpr):
            stack.extend(p[1] for p in reversed(node.parts) if p[0] == "val")
        elif isinstance(node, ObjectLitExpr):
            stack.extend(v for _, v in reversed(node.pairs))
        elif isinstance(node, ArrayLitExpr):
            stack.extend(reversed(node.elements))
        elif isinstance(node, FieldRef):
            out.append(node)
            stack.append(node.base)
        elif isinstance(node, ArrayRef):
            out.append(node)
            stack.extend((node.index, node.base))
        elif isinstance(node, VALUE_TYPES):
            out.append(node)
    return out


def stmt_values(stmt) -> list:
    """All Values a final-form statement touches (reads and writes)."""
    if isinstance(stmt, Assign):
        return expr_values(stmt.lhs) + expr_values(stmt.rhs)
    if isinstance(stmt, Invoke):
        out = expr_values(stmt.base) if stmt.base is not None else []
        for arg in stmt.args:
            out.extend(expr_values(arg))
        if stmt.result is not None:
            out.append(stmt.result)
        return out
    if isinstance(stmt, New):
        return [stmt.result]
    if isinstance(stmt, If):
        return expr_values(stmt.cond)
    if isinstance(stmt, Return):
        return expr_values(stmt.value) if stmt.value is not None else []
    return []
