"""Recursive-descent parser for the ArkTS-like language.

Grammar summary (declarations / statements / expressions):

    module     := (import | export? declaration)*
    declaration:= decorator* (class | struct | interface | namespace
                  | function | let/const)
    class body := decorator* 'static'? name (method | field)
    statement  := let/const | if | while | for | return | block | ';'
                  | component-block (in build context) | expr-statement
    expr       := assignment over the usual binary precedence ladder with
                  calls, member/index access, new, arrow and anonymous
                  functions, object/array literals, and template strings

Component blocks (`Name(args) { children }.chain(args)...`) are recognized
contextually: inside the body of a struct's ``build`` method, and inside the
children braces of another component block, a statement that starts with a
capitalized identifier followed by ``(`` parses as a ComponentBlock; chained
calls may follow the argument list or the closing brace, across newlines.

Statements terminate at ``;`` or at a newline when the next token cannot
continue the expression. A newline before ``(`` or ``[`` terminates the
statement (so a fresh call on the next line is a new statement), while ``.``
and binary operators continue across newlines, which is what chained
component calls rely on.

Error recovery: a parse error inside a declaration records a diagnostic and
skips (brace-aware) to the next declaration or member boundary, so one bad
declaration never takes down the rest of the file.
"""

from __future__ import annotations

from . import astnodes as A
from .astnodes import AstNode
from .diagnostics import (
    Diagnostic,
    Span,
    UNEXPECTED_TOKEN,
    UNSUPPORTED_SYNTAX,
    error,
)
from .lexer import EOF, IDENT, KW, NUMBER, PUNCT, STRING, TEMPLATE, SourceFile, Token, lex

_BIN_PRECEDENCE = {
    "||": 1, "&&": 2,
    "==": 3, "!=": 3, "===": 3, "!==": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4, "in": 4, "instanceof": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}

_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%="}

_DECL_START_KWS = {"class", "struct", "interface", "namespace", "function",
                   "let", "const", "import", "export"}


class _ParseError(Exception):
    pass


class Parser:
    def __init__(self, tokens: list[Token], path: str,
                 diagnostics: list[Diagnostic] | None = None):
        self.tokens = tokens
        self.path = path
        self.pos = 0
        self.diagnostics = diagnostics if diagnostics is not None else []

    # ------------------------------------------------------------- cursor

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def at_end(self) -> bool:
        return self.peek().kind == EOF

    def at_punct(self, text: str) -> bool:
        t = self.peek()
        return t.kind == PUNCT and t.text == text

    def at_kw(self, text: str) -> bool:
        t = self.peek()
        return t.kind == KW and t.text == text

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if self.pos < len(self.tokens) - 1:
            self.pos += 1
        return tok

    def prev_end(self) -> tuple[int, int]:
        t = self.tokens[max(0, self.pos - 1)]
        return t.end_line, t.end_col

    def fail(self, message: str, code: str = UNEXPECTED_TOKEN) -> _ParseError:
        tok = self.peek()
        self.diagnostics.append(error(self.path, tok.span, code, message))
        return _ParseError(message)

    def expect_punct(self, text: str) -> Token:
        if self.at_punct(text):
            return self.advance()
        raise self.fail(f"expected {text!r} but found {self.peek().text!r}")

    def expect_word(self, what: str = "name") -> Token:
        t = self.peek()
        if t.kind in (IDENT, KW):
            return self.advance()
        raise self.fail(f"expected {what} but found {t.text!r}")

    def expect_ident(self) -> Token:
        t = self.peek()
        if t.kind == IDENT:
            return self.advance()
        raise self.fail(f"expected identifier but found {t.text!r}")

    def span_from(self, start: Token) -> Span:
        end_line, end_col = self.prev_end()
        return Span(start.line, start.col, end_line, end_col)

    # ------------------------------------------------------------- module

    def parse_module(self) -> AstNode:
        start = self.peek()
        decls: list[AstNode] = []
        while not self.at_end():
            before = self.pos
            try:
                node = self.parse_top_level()
                if node is not None:
                    decls.append(node)
            except _ParseError:
                self.sync_declaration()
            if self.pos == before:  # always make progress
                self.advance()
        span = self.span_from(start) if decls else Span.point(1, 1)
        return AstNode(A.MODULE, span, decls)

    def sync_declaration(self) -> None:
        depth = 0
        while not self.at_end():
            t = self.peek()
            if t.kind == PUNCT and t.text in "({[":
                depth += 1
            elif t.kind == PUNCT and t.text in ")}]":
                if depth == 0:
                    self.advance()
                    return
                depth -= 1
            elif depth == 0 and (
                (t.kind == KW and t.text in _DECL_START_KWS)
                or (t.kind == PUNCT and t.text == "@")
            ):
                return
            self.advance()

    def parse_top_level(self) -> AstNode | None:
        if self.at_kw("import"):
            return self.parse_import()
        if self.at_kw("export"):
            self.advance()
            if self.peek().kind == IDENT and self.peek().text == "default":
                self.advance()
            node = self.parse_top_level()
            if node is not None:
                node.attrs["export"] = True
            return node
        if self.at_punct(";"):
            self.advance()
            return None
        decorators = self.parse_decorators()
        if self.at_kw("class"):
            return self.parse_class_like("class", decorators)
        if self.at_kw("struct"):
            return self.parse_class_like("struct", decorators)
        if self.at_kw("interface"):
            return self.parse_class_like("interface", decorators)
        if self.at_kw("namespace"):
            return self.parse_namespace(decorators)
        if self.at_kw("function"):
            return self.parse_function(decorators)
        if self.at_kw("let") or self.at_kw("const"):
            nodes = self.parse_var_statement()
            if len(nodes) == 1:
                return nodes[0]
            # Wrap multiple declarators so the module keeps one node each.
            for extra in nodes[1:]:
                extra.attrs["decorators"] = []
            nodes[0].attrs["decorators"] = decorators
            wrapper = AstNode(A.BLOCK, nodes[0].span.cover(nodes[-1].span), nodes)
            wrapper.attrs["var_group"] = True
            return wrapper
        # Tolerate stray top-level statements; the scene builder decides
        # whether it can use them.
        stmts = self.parse_statement(False)
        if len(stmts) == 1:
            return stmts[0]
        raise self.fail("expected a declaration")

    def parse_import(self) -> AstNode:
        start = self.expect_word()
        names: list[str] = []
        module = ""
        if self.at_punct("{"):
            self.advance()
            while not self.at_punct("}") and not self.at_end():
                names.append(self.expect_word("import name").text)
                if self.at_punct(","):
                    self.advance()
            self.expect_punct("}")
        elif self.at_punct("*"):
            self.advance()
            if self.peek().text == "as":
                self.advance()
                names.append(self.expect_word("import alias").text)
        elif self.peek().kind in (IDENT, KW):
            names.append(self.advance().text)
        if self.at_kw("from"):
            self.advance()
            tok = self.peek()
            if tok.kind == STRING:
                module = tok.value
                self.advance()
            else:
                raise self.fail("expected module string after 'from'")
        elif self.peek().kind == STRING:  # import 'module'
            module = self.advance().value
        self.end_statement()
        node = AstNode(A.IMPORT_DECL, self.span_from(start))
        node.attrs.update(names=names, module=module)
        return node

    # --------------------------------------------------------- decorators

    def parse_decorators(self) -> list[AstNode]:
        out: list[AstNode] = []
        while self.at_punct("@"):
            start = self.advance()
            name = self.expect_word("decorator name").text
            args: list[AstNode] = []
            if self.at_punct("(") and not self.peek().newline_before:
                args = self.parse_args()
            node = AstNode(A.DECORATOR, self.span_from(start))
            node.attrs.update(name=name, args=args)
            out.append(node)
        return out

    # -------------------------------------------------------------- decls

    def parse_class_like(self, kind: str, decorators: list[AstNode]) -> AstNode:
        start = self.advance()  # class/struct/interface keyword
        name = self.expect_ident().text
        superclass = None
        interfaces: list[str] = []
        if self.at_kw("extends"):
            self.advance()
            superclass = self.expect_ident().text
            while self.at_punct(","):  # interfaces may extend several
                self.advance()
                interfaces.append(self.expect_ident().text)
        if self.at_kw("implements"):
            self.advance()
            interfaces.append(self.expect_ident().text)
            while self.at_punct(","):
                self.advance()
                interfaces.append(self.expect_ident().text)
        self.expect_punct("{")
        members: list[AstNode] = []
        while not self.at_punct("}") and not self.at_end():
            t = self.peek()
            if t.kind == KW and t.text in _DECL_START_KWS:
                # A declaration keyword inside a class body means recovery
                # ran past an unbalanced body; hand control back.
                break
            before = self.pos
            try:
                member = self.parse_member(kind)
                if member is not None:
                    members.append(member)
            except _ParseError:
                self.sync_member()
            if self.pos == before:
                self.advance()
        if self.at_punct("}"):
            self.advance()
        else:
            self.diagnostics.append(error(
                self.path, self.peek().span, UNEXPECTED_TOKEN,
                f"class body of {name!r} is never closed"))
        node = AstNode(A.CLASS_DECL, self.span_from(start), members)
        node.attrs.update(name=name, kind=kind, superclass=superclass,
                          interfaces=interfaces, decorators=decorators)
        return node

    def sync_member(self) -> None:
        depth = 0
        while not self.at_end():
            t = self.peek()
            if t.kind == PUNCT and t.text in "({[":
                depth += 1
            elif t.kind == PUNCT and t.text in ")}]":
                if depth == 0:
                    return
                depth -= 1
            elif depth == 0 and t.kind == KW and t.text in _DECL_START_KWS:
                return
            elif depth == 0 and t.kind == PUNCT and t.text == ";":
                self.advance()
                return
            elif depth == 0 and t.newline_before and t.kind in (IDENT, KW) \
                    and t.text != "else":
                return
            self.advance()

    def parse_member(self, class_kind: str) -> AstNode | None:
        if self.at_punct(";"):
            self.advance()
            return None
        decorators = self.parse_decorators()
        is_static = False
        if self.at_kw("static"):
            self.advance()
            is_static = True
        t = self.peek()
        if t.kind == KW and t.text in _DECL_START_KWS:
            raise self.fail(f"{t.text!r} cannot start a class member")
        name_tok = self.expect_word("member name")
        name = name_tok.text
        if self.at_punct("("):
            return self.parse_method(name_tok, name, is_static, decorators, class_kind)
        # Field
        type_node = None
        init = None
        if self.at_punct("?"):
            self.advance()
        if self.at_punct(":"):
            self.advance()
            type_node = self.parse_type()
        if self.at_punct("="):
            self.advance()
            init = self.parse_expr()
        self.end_statement()
        node = AstNode(A.FIELD_DECL, self.span_from(name_tok))
        node.attrs.update(name=name, static=is_static, type=type_node,
                          init=init, decorators=decorators)
        return node

    def parse_method(self, start: Token, name: str, is_static: bool,
                     decorators: list[AstNode], class_kind: str) -> AstNode:
        params = self.parse_params()
        return_type = None
        if self.at_punct(":"):
            self.advance()
            return_type = self.parse_type()
        body = None
        if self.at_punct("{"):
            component_ctx = class_kind == "struct" and name == "build"
            body = self.parse_block(component_ctx)
        else:
            self.end_statement()
        node = AstNode(A.METHOD_DECL, self.span_from(start))
        node.attrs.update(name=name, static=is_static, params=params,
                          return_type=return_type, body=body,
                          decorators=decorators, abstract=body is None)
        return node

    def parse_namespace(self, decorators: list[AstNode]) -> AstNode:
        start = self.advance()
        name = self.expect_ident().text
        self.expect_punct("{")
        decls: list[AstNode] = []
        while not self.at_punct("}") and not self.at_end():
            before = self.pos
            try:
                node = self.parse_top_level()
                if node is not None:
                    decls.append(node)
            except _ParseError:
                self.sync_declaration()
            if self.pos == before:
                self.advance()
        self.expect_punct("}")
        node = AstNode(A.NAMESPACE_DECL, self.span_from(start), decls)
        node.attrs.update(name=name, decorators=decorators)
        return node

    def parse_function(self, decorators: list[AstNode]) -> AstNode:
        start = self.advance()
        name = self.expect_ident().text
        params = self.parse_params()
        return_type = None
        if self.at_punct(":"):
            self.advance()
            return_type = self.parse_type()
        body = self.parse_block(False) if self.at_punct("{") else None
        node = AstNode(A.FUNCTION_DECL, self.span_from(start))
        node.attrs.update(name=name, params=params, return_type=return_type,
                          body=body, decorators=decorators)
        if body is None:
            self.end_statement()
        return node

    def parse_params(self) -> list[AstNode]:
        self.expect_punct("(")
        params: list[AstNode] = []
        while not self.at_punct(")") and not self.at_end():
            start = self.peek()
            rest = False
            if self.at_punct("..."):
                self.advance()
                rest = True
            name = self.expect_word("parameter name").text
            optional = False
            if self.at_punct("?"):
                self.advance()
                optional = True
            type_node = None
            if self.at_punct(":"):
                self.advance()
                type_node = self.parse_type()
            default = None
            if self.at_punct("="):
                self.advance()
                default = self.parse_expr()
                optional = True
            node = AstNode(A.PARAM_DECL, self.span_from(start))
            node.attrs.update(name=name, optional=optional, rest=rest,
                              type=type_node, default=default)
            params.append(node)
            if self.at_punct(","):
                self.advance()
            elif not self.at_punct(")"):
                raise self.fail("expected ',' or ')' in parameter list")
        self.expect_punct(")")
        return params

    # -------------------------------------------------------------- types

    def parse_type(self) -> AstNode:
        node = self.parse_primary_type()
        while self.at_punct("[") and self.peek(1).text == "]" \
                and not self.peek().newline_before:
            self.advance(); self.advance()
            wrapped = AstNode(A.TYPE_ANNO, node.span, [node])
            wrapped.attrs.update(form="array", name="",
                                 text=node.attrs.get("text", "") + "[]")
            node = wrapped
        if self.at_punct("|"):
            self.diagnostics.append(error(
                self.path, self.peek().span, UNSUPPORTED_SYNTAX,
                "union types are not supported; using the first alternative"))
            self.advance()
            self.parse_type()
        return node

    def parse_primary_type(self) -> AstNode:
        start = self.peek()
        if self.at_punct("("):
            # function type: (a: T, b: U) => R
            self.advance()
            param_types: list[AstNode] = []
            while not self.at_punct(")") and not self.at_end():
                if self.at_punct("..."):
                    self.advance()
                if self.peek().kind in (IDENT, KW) and self.peek(1).text in (":", "?"):
                    self.advance()
                    if self.at_punct("?"):
                        self.advance()
                    self.expect_punct(":")
                param_types.append(self.parse_type())
                if self.at_punct(","):
                    self.advance()
            self.expect_punct(")")
            self.expect_punct("=>")
            ret = self.parse_type()
            node = AstNode(A.TYPE_ANNO, self.span_from(start), param_types + [ret])
            params_text = ", ".join(p.attrs.get("text", "") for p in param_types)
            node.attrs.update(form="function", name="",
                              text=f"({params_text}) => {ret.attrs.get('text', '')}")
            return node
        tok = self.expect_word("type name")
        name = tok.text
        args: list[AstNode] = []
        if self.at_punct("<"):
            self.advance()
            while not self.at_punct(">") and not self.at_end():
                args.append(self.parse_type())
                if self.at_punct(","):
                    self.advance()
            self.expect_punct(">")
        node = AstNode(A.TYPE_ANNO, self.span_from(start), args)
        text = name
        if args:
            text += "<" + ", ".join(a.attrs.get("text", "") for a in args) + ">"
        node.attrs.update(form="named", name=name, text=text)
        return node

    # --------------------------------------------------------- statements

    def parse_block(self, component_ctx: bool) -> AstNode:
        start = self.expect_punct("{")
        stmts: list[AstNode] = []
        while not self.at_punct("}") and not self.at_end():
            before = self.pos
            try:
                stmts.extend(self.parse_statement(component_ctx))
            except _ParseError:
                self.sync_statement()
            if self.pos == before:
                self.advance()
        self.expect_punct("}")
        return AstNode(A.BLOCK, self.span_from(start), stmts)

    def sync_statement(self) -> None:
        depth = 0
        while not self.at_end():
            t = self.peek()
            if t.kind == PUNCT and t.text in "({[":
                depth += 1
            elif t.kind == PUNCT and t.text in ")}]":
                if depth == 0:
                    return
                depth -= 1
            elif depth == 0 and t.kind == PUNCT and t.text == ";":
                self.advance()
                return
            elif depth == 0 and t.newline_before:
                return
            self.advance()

    def end_statement(self) -> None:
        if self.at_punct(";"):
            self.advance()
            return
        t = self.peek()
        if t.kind == EOF or t.newline_before:
            return
        if t.kind == PUNCT and t.text == "}":
            return
        if t.kind == KW and t.text == "else":
            return
        raise self.fail(f"expected end of statement before {t.text!r}")

    def parse_statement(self, component_ctx: bool) -> list[AstNode]:
        t = self.peek()
        if t.kind == PUNCT and t.text == ";":
            self.advance()
            return []
        if t.kind == PUNCT and t.text == "{":
            return [self.parse_block(component_ctx)]
        if self.at_kw("let") or self.at_kw("const"):
            return self.parse_var_statement()
        if self.at_kw("if"):
            return [self.parse_if(component_ctx)]
        if self.at_kw("while"):
            return [self.parse_while(component_ctx)]
        if self.at_kw("for"):
            return [self.parse_for(component_ctx)]
        if self.at_kw("return"):
            return [self.parse_return()]
        if component_ctx and t.kind == IDENT and t.text[:1].isupper() \
                and self.peek(1).kind == PUNCT and self.peek(1).text == "(":
            return [self.parse_component_block()]
        return [self.parse_expr_statement()]

    def parse_var_statement(self) -> list[AstNode]:
        start = self.advance()
        const = start.text == "const"
        out: list[AstNode] = []
        while True:
            name_tok = self.expect_ident()
            type_node = None
            init = None
            if self.at_punct(":"):
                self.advance()
                type_node = self.parse_type()
            if self.at_punct("="):
                self.advance()
                init = self.parse_expr()
            node = AstNode(A.VAR_DECL, self.span_from(start if not out else name_tok))
            node.attrs.update(name=name_tok.text, const=const, type=type_node,
                              init=init)
            out.append(node)
            if self.at_punct(","):
                self.advance()
                continue
            break
        self.end_statement()
        return out

    def parse_if(self, component_ctx: bool) -> AstNode:
        start = self.advance()
        self.expect_punct("(")
        cond = self.parse_expr()
        self.expect_punct(")")
        then = self.parse_branch(component_ctx)
        children = [cond, then]
        if self.at_kw("else"):
            self.advance()
            if self.at_kw("if"):
                children.append(self.parse_if(component_ctx))
            else:
                children.append(self.parse_branch(component_ctx))
        return AstNode(A.IF_STMT, self.span_from(start), children)

    def parse_branch(self, component_ctx: bool) -> AstNode:
        if self.at_punct("{"):
            return self.parse_block(component_ctx)
        start = self.peek()
        stmts = self.parse_statement(component_ctx)
        span = self.span_from(start)
        return AstNode(A.BLOCK, span, stmts)

    def parse_while(self, component_ctx: bool) -> AstNode:
        start = self.advance()
        self.expect_punct("(")
        cond = self.parse_expr()
        self.expect_punct(")")
        body = self.parse_branch(component_ctx)
        return AstNode(A.WHILE_STMT, self.span_from(start), [cond, body])

    def parse_for(self, component_ctx: bool) -> AstNode:
        start = self.advance()
        self.expect_punct("(")
        init: list[AstNode] = []
        if not self.at_punct(";"):
            if self.at_kw("let") or self.at_kw("const"):
                kw = self.advance()
                const = kw.text == "const"
                while True:
                    name_tok = self.expect_ident()
                    type_node = None
                    init_expr = None
                    if self.at_punct(":"):
                        self.advance()
                        type_node = self.parse_type()
                    if self.at_punct("="):
                        self.advance()
                        init_expr = self.parse_expr()
                    decl = AstNode(A.VAR_DECL, self.span_from(name_tok))
                    decl.attrs.update(name=name_tok.text, const=const,
                                      type=type_node, init=init_expr)
                    init.append(decl)
                    if self.at_punct(","):
                        self.advance()
                        continue
                    break
            else:
                init.append(self.parse_simple_expr_statement())
        self.expect_punct(";")
        cond = None
        if not self.at_punct(";"):
            cond = self.parse_expr()
        self.expect_punct(";")
        update: list[AstNode] = []
        if not self.at_punct(")"):
            update.append(self.parse_simple_expr_statement())
            while self.at_punct(","):
                self.advance()
                update.append(self.parse_simple_expr_statement())
        self.expect_punct(")")
        body = self.parse_branch(component_ctx)
        node = AstNode(A.FOR_STMT, self.span_from(start), [body])
        node.attrs.update(init=init, cond=cond, update=update)
        return node

    def parse_return(self) -> AstNode:
        start = self.advance()
        children: list[AstNode] = []
        t = self.peek()
        if not (t.newline_before or self.at_punct(";") or self.at_punct("}")
                or t.kind == EOF):
            children.append(self.parse_expr())
        self.end_statement()
        return AstNode(A.RETURN_STMT, self.span_from(start), children)

    def parse_expr_statement(self) -> AstNode:
        node = self.parse_simple_expr_statement()
        self.end_statement()
        return node

    def parse_simple_expr_statement(self) -> AstNode:
        start = self.peek()
        expr = self.parse_expr()
        t = self.peek()
        if t.kind == PUNCT and t.text in _ASSIGN_OPS:
            if expr.kind not in (A.IDENTIFIER, A.MEMBER, A.INDEX):
                raise self.fail("invalid assignment target")
            op = self.advance().text
            rhs = self.parse_expr()
            node = AstNode(A.ASSIGN, self.span_from(start), [expr, rhs])
            node.attrs["op"] = op
            return node
        return AstNode(A.EXPR_STMT, self.span_from(start), [expr])

    # ------------------------------------------------------------ components

    def parse_component_block(self) -> AstNode:
        start = self.peek()
        name = self.expect_ident().text
        args = self.parse_args()
        children: list[AstNode] = []
        if self.at_punct("{"):
            body = self.parse_block(True)
            children = body.children
        chains: list[AstNode] = []
        while self.at_punct("."):
            self.advance()
            chain_start = self.peek()
            chain_name = self.expect_word("chained call name").text
            chain_args = self.parse_args() if self.at_punct("(") else []
            chain = AstNode(A.COMPONENT_CHAIN, self.span_from(chain_start))
            chain.attrs.update(name=chain_name, args=chain_args)
            chains.append(chain)
        self.end_statement()
        node = AstNode(A.COMPONENT_BLOCK, self.span_from(start), children)
        node.attrs.update(name=name, args=args, chains=chains)
        return node

    # ---------------------------------------------------------- expressions

    def parse_args(self) -> list[AstNode]:
        self.expect_punct("(")
        args: list[AstNode] = []
        while not self.at_punct(")") and not self.at_end():
            args.append(self.parse_expr())
            if self.at_punct(","):
                self.advance()
            elif not self.at_punct(")"):
                raise self.fail("expected ',' or ')' in argument list")
        self.expect_punct(")")
        return args

    def parse_expr(self) -> AstNode:
        node = self.parse_binary(0)
        if self.at_punct("?"):
            self.diagnostics.append(error(
                self.path, self.peek().span, UNSUPPORTED_SYNTAX,
                "conditional expressions are not supported"))
            self.advance()
            self.parse_expr()
            if self.at_punct(":"):
                self.advance()
                self.parse_expr()
        return node

    def parse_binary(self, min_prec: int) -> AstNode:
        left = self.parse_unary()
        while True:
            t = self.peek()
            op = t.text if t.kind in (PUNCT, KW) else ""
            prec = _BIN_PRECEDENCE.get(op)
            if prec is None or prec < min_prec:
                return left
            self.advance()
            right = self.parse_binary(prec + 1)
            node = AstNode(A.BINARY, left.span.cover(right.span), [left, right])
            node.attrs["op"] = op
            left = node

    def parse_unary(self) -> AstNode:
        t = self.peek()
        if t.kind == PUNCT and t.text in ("!", "-", "+"):
            start = self.advance()
            operand = self.parse_unary()
            node = AstNode(A.UNARY, self.span_from(start), [operand])
            node.attrs["op"] = start.text
            return node
        if t.kind == PUNCT and t.text in ("++", "--"):
            start = self.advance()
            operand = self.parse_unary()
            node = AstNode(A.PREFIX_UNARY, self.span_from(start), [operand])
            node.attrs["op"] = start.text
            return node
        return self.parse_postfix()

    def parse_postfix(self) -> AstNode:
        node = self.parse_primary()
        while True:
            t = self.peek()
            if t.kind != PUNCT:
                return node
            if t.text == ".":
                self.advance()
                name = self.expect_word("property name").text
                member = AstNode(A.MEMBER, self.span_from_node(node), [node])
                member.attrs["name"] = name
                node = member
            elif t.text == "(" and not t.newline_before:
                args = self.parse_args()
                node = AstNode(A.CALL, self.span_from_node(node), [node] + args)
            elif t.text == "[" and not t.newline_before:
                self.advance()
                index = self.parse_expr()
                self.expect_punct("]")
                node = AstNode(A.INDEX, self.span_from_node(node), [node, index])
            elif t.text in ("++", "--") and not t.newline_before:
                self.advance()
                wrapped = AstNode(A.POSTFIX_UNARY, self.span_from_node(node), [node])
                wrapped.attrs["op"] = t.text
                node = wrapped
            else:
                return node

    def span_from_node(self, node: AstNode) -> Span:
        end_line, end_col = self.prev_end()
        return Span(node.span.start_line, node.span.start_col, end_line, end_col)

    def parse_primary(self) -> AstNode:
        t = self.peek()
        if t.kind == NUMBER:
            self.advance()
            node = AstNode(A.LITERAL, t.span)
            node.attrs.update(value=t.value, lit="number")
            return node
        if t.kind == STRING:
            self.advance()
            node = AstNode(A.LITERAL, t.span)
            node.attrs.update(value=t.value, lit="string")
            return node
        if t.kind == TEMPLATE:
            return self.parse_template(self.advance())
        if t.kind == KW:
            if t.text in ("true", "false"):
                self.advance()
                node = AstNode(A.LITERAL, t.span)
                node.attrs.update(value=t.text == "true", lit="boolean")
                return node
            if t.text == "null":
                self.advance()
                node = AstNode(A.LITERAL, t.span)
                node.attrs.update(value=None, lit="null")
                return node
            if t.text == "undefined":
                self.advance()
                node = AstNode(A.LITERAL, t.span)
                node.attrs.update(value=None, lit="undefined")
                return node
            if t.text == "this":
                self.advance()
                return AstNode(A.THIS_EXPR, t.span)
            if t.text == "new":
                return self.parse_new()
            if t.text == "function":
                return self.parse_anon_fn()
        if t.kind == IDENT:
            if self.peek(1).kind == PUNCT and self.peek(1).text == "=>":
                return self.parse_arrow_from_single_param()
            self.advance()
            node = AstNode(A.IDENTIFIER, t.span)
            node.attrs["name"] = t.text
            return node
        if t.kind == PUNCT and t.text == "(":
            if self.looks_like_arrow():
                return self.parse_arrow()
            self.advance()
            node = self.parse_expr()
            self.expect_punct(")")
            return node
        if t.kind == PUNCT and t.text == "{":
            return self.parse_object_literal()
        if t.kind == PUNCT and t.text == "[":
            return self.parse_array_literal()
        raise self.fail(f"expected an expression but found {t.text!r}")

    def parse_new(self) -> AstNode:
        start = self.advance()
        name = self.expect_ident().text
        args = self.parse_args() if self.at_punct("(") else []
        node = AstNode(A.NEW_EXPR, self.span_from(start), args)
        node.attrs["name"] = name
        return node

    def looks_like_arrow(self) -> bool:
        """From an opening '(': scan to the matching ')' and check '=>'."""
        depth = 0
        i = self.pos
        while i < len(self.tokens):
            tok = self.tokens[i]
            if tok.kind == PUNCT and tok.text in "([{":
                depth += 1
            elif tok.kind == PUNCT and tok.text in ")]}":
                depth -= 1
                if depth == 0:
                    nxt = self.tokens[i + 1] if i + 1 < len(self.tokens) else None
                    return nxt is not None and nxt.kind == PUNCT and nxt.text == "=>"
            elif tok.kind == EOF:
                return False
            i += 1
        return False

    def parse_arrow_from_single_param(self) -> AstNode:
        start = self.peek()
        name_tok = self.expect_ident()
        param = AstNode(A.PARAM_DECL, name_tok.span)
        param.attrs.update(name=name_tok.text, optional=False, rest=False,
                           type=None, default=None)
        self.expect_punct("=>")
        return self.finish_arrow(start, [param])

    def parse_arrow(self) -> AstNode:
        start = self.peek()
        params = self.parse_params()
        self.expect_punct("=>")
        return self.finish_arrow(start, params)

    def finish_arrow(self, start: Token, params: list[AstNode]) -> AstNode:
        if self.at_punct("{"):
            body = self.parse_block(False)
            expr_body = False
        else:
            body = self.parse_expr()
            expr_body = True
        node = AstNode(A.ARROW_FN, self.span_from(start), [body])
        node.attrs.update(params=params, expr_body=expr_body)
        return node

    def parse_anon_fn(self) -> AstNode:
        start = self.advance()  # 'function'
        if self.peek().kind == IDENT:  # tolerate a name; treated as anonymous
            self.advance()
        params = self.parse_params()
        if self.at_punct(":"):
            self.advance()
            self.parse_type()
        body = self.parse_block(False)
        node = AstNode(A.ANON_FN, self.span_from(start), [body])
        node.attrs.update(params=params, expr_body=False)
        return node

    def parse_object_literal(self) -> AstNode:
        start = self.expect_punct("{")
        props: list[AstNode] = []
        while not self.at_punct("}") and not self.at_end():
            key_tok = self.peek()
            if key_tok.kind == STRING:
                self.advance()
                key = key_tok.value
            else:
                key = self.expect_word("property name").text
            self.expect_punct(":")
            value = self.parse_expr()
            prop = AstNode(A.OBJECT_PROPERTY, self.span_from(key_tok), [value])
            prop.attrs["name"] = key
            props.append(prop)
            if self.at_punct(","):
                self.advance()
            elif not self.at_punct("}"):
                raise self.fail("expected ',' or '}' in object literal")
        self.expect_punct("}")
        return AstNode(A.OBJECT_LITERAL, self.span_from(start), props)

    def parse_array_literal(self) -> AstNode:
        start = self.expect_punct("[")
        elements: list[AstNode] = []
        while not self.at_punct("]") and not self.at_end():
            elements.append(self.parse_expr())
            if self.at_punct(","):
                self.advance()
            elif not self.at_punct("]"):
                raise self.fail("expected ',' or ']' in array literal")
        self.expect_punct("]")
        return AstNode(A.ARRAY_LITERAL, self.span_from(start), elements)

    def parse_template(self, tok: Token) -> AstNode:
        parts: list[tuple] = []
        for part in tok.value:
            if part[0] == "text":
                parts.append(("text", part[1]))
            else:
                sub = Parser(part[1], self.path, self.diagnostics)
                expr = sub.parse_expr()
                if not sub.at_end():
                    self.diagnostics.append(error(
                        self.path, sub.peek().span, UNEXPECTED_TOKEN,
                        "unexpected tokens in template hole"))
                parts.append(("expr", expr))
        node = AstNode(A.TEMPLATE_STRING, tok.span)
        node.attrs["parts"] = parts
        return node


def parse(source: SourceFile) -> tuple[AstNode, list[Diagnostic]]:
    """Parse one file; always returns a Module node plus diagnostics."""
    tokens, diagnostics = lex(source)
    parser = Parser(tokens, source.path, diagnostics)
    module = parser.parse_module()
    return module, diagnostics
