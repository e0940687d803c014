"""AST node model produced by the parser.

Nodes are a single dataclass with a ``kind`` tag, a source span, ordered
children, and a small attribute dict; structural equality (used by the
determinism tests) covers all four. Helper accessors below document the
shape each kind uses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Span

# Declarations
MODULE = "Module"
IMPORT_DECL = "ImportDecl"
NAMESPACE_DECL = "NamespaceDecl"
CLASS_DECL = "ClassDecl"           # attrs: name, kind ('class'|'struct'|'interface'), superclass, interfaces
FUNCTION_DECL = "FunctionDecl"     # attrs: name
METHOD_DECL = "MethodDecl"         # attrs: name, static, abstract(body-less)
FIELD_DECL = "FieldDecl"           # attrs: name, static
PARAM_DECL = "ParamDecl"           # attrs: name, optional, rest
DECORATOR = "Decorator"            # attrs: name
TYPE_ANNO = "TypeAnno"             # attrs: form ('named'|'array'|'function'), name, text

# Statements
BLOCK = "Block"
VAR_DECL = "VarDecl"               # attrs: name, const
IF_STMT = "If"
WHILE_STMT = "While"
FOR_STMT = "For"
RETURN_STMT = "Return"
EXPR_STMT = "ExprStmt"
ASSIGN = "Assign"                  # attrs: op ('=', '+=', ...)
EMPTY_STMT = "Empty"

# Expressions
IDENTIFIER = "Identifier"          # attrs: name
LITERAL = "Literal"                # attrs: value, lit ('number'|'string'|'boolean'|'null'|'undefined')
THIS_EXPR = "This"
BINARY = "Binary"                  # attrs: op
UNARY = "Unary"                    # attrs: op
POSTFIX_UNARY = "PostfixUnary"     # attrs: op ('++'|'--')
PREFIX_UNARY = "PrefixUnary"       # attrs: op ('++'|'--')
CALL = "Call"                      # children: callee, args...
NEW_EXPR = "New"                   # attrs: name; children: args...
MEMBER = "Member"                  # attrs: name; children: base
INDEX = "Index"                    # children: base, index
ARROW_FN = "ArrowFn"               # children: params..., body
ANON_FN = "AnonFn"                 # children: params..., body
OBJECT_LITERAL = "ObjectLiteral"   # children: ObjectProperty...
OBJECT_PROPERTY = "ObjectProperty" # attrs: name; children: value
ARRAY_LITERAL = "ArrayLiteral"
TEMPLATE_STRING = "TemplateString" # children: Literal/expr alternating; attrs: shape list
COMPONENT_BLOCK = "ComponentBlock" # attrs: name; children: args, children-components, chains
COMPONENT_CHAIN = "ComponentChain" # attrs: name; children: args...
ARG_LIST = "Args"
CHILD_LIST = "Children"
CHAIN_LIST = "Chains"


@dataclass
class AstNode:
    kind: str
    span: Span
    children: list["AstNode"] = field(default_factory=list)
    attrs: dict = field(default_factory=dict)

    def attr(self, key: str, default=None):
        return self.attrs.get(key, default)

    @property
    def name(self) -> str:
        return self.attrs.get("name", "")

    def child(self, index: int) -> "AstNode":
        return self.children[index]

    def find_all(self, kind: str) -> list["AstNode"]:
        """Preorder collection of descendants (including self) of a kind."""
        out = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.kind == kind:
                out.append(node)
            stack.extend(reversed(node.children))
        return out

    def walk(self):
        """Preorder traversal covering children and nodes stored in attrs
        (inits, loop clauses, params, template holes, chains)."""
        yield self
        for child in self.children:
            yield from child.walk()
        for key in sorted(self.attrs):
            yield from _walk_value(self.attrs[key])

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        bits = [self.kind]
        if "name" in self.attrs:
            bits.append(self.attrs["name"])
        if "op" in self.attrs:
            bits.append(self.attrs["op"])
        return f"<{' '.join(str(b) for b in bits)} at {self.span.start_line}:{self.span.start_col}>"


def _walk_value(value):
    if isinstance(value, AstNode):
        yield from value.walk()
    elif isinstance(value, (list, tuple)):
        for item in value:
            yield from _walk_value(item)
