"""Tokenizer for the ArkTS-like source language.

Produces a flat token stream with 1-based line/column spans. Template
literals are lexed as single TEMPLATE tokens whose value is a list of parts:
``("text", str)`` for literal segments and ``("tokens", [Token, ...])`` for
interpolation holes, the holes being tokenized recursively with the same
scanner so spans stay accurate. Each token records whether a newline
preceded it, which the parser uses for statement termination.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import (
    Diagnostic,
    Span,
    UNEXPECTED_TOKEN,
    UNTERMINATED_COMMENT,
    UNTERMINATED_STRING,
    UNTERMINATED_TEMPLATE,
    error,
)

IDENT = "ident"
KW = "kw"
NUMBER = "number"
STRING = "string"
TEMPLATE = "template"
PUNCT = "punct"
EOF = "eof"

KEYWORDS = {
    "class", "struct", "interface", "namespace", "function", "let", "const",
    "if", "else", "while", "for", "return", "new", "this", "extends",
    "implements", "static", "import", "export", "from", "in", "instanceof",
    "true", "false", "null", "undefined",
}

# Longest match first.
PUNCTUATION = [
    "===", "!==", "...",
    "==", "!=", "<=", ">=", "&&", "||", "=>", "++", "--",
    "+=", "-=", "*=", "/=", "%=",
    "+", "-", "*", "/", "%", "<", ">", "=", "(", ")", "{", "}", "[", "]",
    ",", ";", ":", ".", "@", "?", "!",
]


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int
    end_line: int
    end_col: int
    newline_before: bool = False
    value: object = None  # number value, decoded string, or template parts

    @property
    def span(self) -> Span:
        return Span(self.line, self.col, self.end_line, self.end_col)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


@dataclass
class SourceFile:
    """A source file plus the line index used for span slicing.

    ``line_offsets[i]`` is the text offset where line ``i+1`` starts; the
    first entry is always 0 and the sequence is strictly increasing.
    """

    path: str
    text: str
    line_offsets: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.line_offsets:
            offsets = [0]
            for i, ch in enumerate(self.text):
                if ch == "\n":
                    offsets.append(i + 1)
            self.line_offsets = offsets

    def offset(self, line: int, col: int) -> int:
        return self.line_offsets[line - 1] + (col - 1)

    def slice(self, span: Span) -> str:
        return self.text[self.offset(span.start_line, span.start_col):
                         self.offset(span.end_line, span.end_col)]


class _Scanner:
    def __init__(self, src: SourceFile):
        self.src = src
        self.text = src.text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.diagnostics: list[Diagnostic] = []

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def error_here(self, code: str, message: str) -> None:
        self.diagnostics.append(
            error(self.src.path, Span.point(self.line, self.col), code, message))

    # Returns True if at least one newline was crossed.
    def skip_trivia(self) -> bool:
        saw_newline = False
        while not self.at_end():
            ch = self.peek()
            if ch in " \t\r":
                self.advance()
            elif ch == "\n":
                saw_newline = True
                self.advance()
            elif ch == "/" and self.peek(1) == "/":
                while not self.at_end() and self.peek() != "\n":
                    self.advance()
            elif ch == "/" and self.peek(1) == "*":
                start_line, start_col = self.line, self.col
                self.advance(); self.advance()
                closed = False
                while not self.at_end():
                    if self.peek() == "*" and self.peek(1) == "/":
                        self.advance(); self.advance()
                        closed = True
                        break
                    if self.peek() == "\n":
                        saw_newline = True
                    self.advance()
                if not closed:
                    self.diagnostics.append(error(
                        self.src.path, Span.point(start_line, start_col),
                        UNTERMINATED_COMMENT, "block comment is never closed"))
            else:
                break
        return saw_newline

    def scan_tokens(self, stop_at: str | None = None) -> list[Token]:
        """Tokenize until EOF or an unbalanced ``stop_at`` punctuation.

        ``stop_at`` is used for template holes: scanning stops right before
        the ``}`` that closes the hole (brace depth aware).
        """
        tokens: list[Token] = []
        depth = 0
        newline_pending = False
        while True:
            newline_pending = self.skip_trivia() or newline_pending
            if self.at_end():
                break
            if stop_at is not None and depth == 0 and self.peek() == stop_at:
                break
            tok = self.scan_one()
            if tok is None:
                continue
            tok.newline_before = newline_pending
            newline_pending = False
            if tok.kind == PUNCT:
                if tok.text in "({[":
                    depth += 1
                elif tok.text in ")}]":
                    depth -= 1
            tokens.append(tok)
        tokens.append(Token(EOF, "", self.line, self.col, self.line, self.col,
                            newline_before=newline_pending))
        return tokens

    def scan_one(self) -> Token | None:
        start_line, start_col = self.line, self.col
        ch = self.peek()
        if ch.isdigit() or (ch == "." and self.peek(1).isdigit()):
            return self.scan_number(start_line, start_col)
        if ch.isalpha() or ch in "_$":
            return self.scan_word(start_line, start_col)
        if ch in "'\"":
            return self.scan_string(start_line, start_col)
        if ch == "`":
            return self.scan_template(start_line, start_col)
        for punct in PUNCTUATION:
            if self.text.startswith(punct, self.pos):
                for _ in punct:
                    self.advance()
                return Token(PUNCT, punct, start_line, start_col, self.line, self.col)
        self.error_here(UNEXPECTED_TOKEN, f"unexpected character {ch!r}")
        self.advance()
        return None

    def scan_number(self, line: int, col: int) -> Token:
        start = self.pos
        while not self.at_end() and self.peek().isdigit():
            self.advance()
        is_float = False
        if self.peek() == "." and self.peek(1).isdigit():
            is_float = True
            self.advance()
            while not self.at_end() and self.peek().isdigit():
                self.advance()
        text = self.text[start:self.pos]
        value = float(text) if is_float else int(text)
        return Token(NUMBER, text, line, col, self.line, self.col, value=value)

    def scan_word(self, line: int, col: int) -> Token:
        start = self.pos
        while not self.at_end() and (self.peek().isalnum() or self.peek() in "_$"):
            self.advance()
        text = self.text[start:self.pos]
        kind = KW if text in KEYWORDS else IDENT
        return Token(kind, text, line, col, self.line, self.col)

    _ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'",
                '"': '"', "`": "`", "0": "\0", "$": "$"}

    def scan_string(self, line: int, col: int) -> Token:
        quote = self.advance()
        out: list[str] = []
        while True:
            if self.at_end() or self.peek() == "\n":
                self.diagnostics.append(error(
                    self.src.path, Span.point(line, col), UNTERMINATED_STRING,
                    "string literal is never closed"))
                break
            ch = self.advance()
            if ch == quote:
                break
            if ch == "\\" and not self.at_end():
                esc = self.advance()
                out.append(self._ESCAPES.get(esc, esc))
            else:
                out.append(ch)
        text = self.src.slice(Span(line, col, self.line, self.col))
        return Token(STRING, text, line, col, self.line, self.col, value="".join(out))

    def scan_template(self, line: int, col: int) -> Token:
        self.advance()  # opening backtick
        parts: list[tuple] = []
        buf: list[str] = []

        def flush() -> None:
            if buf:
                parts.append(("text", "".join(buf)))
                buf.clear()

        while True:
            if self.at_end():
                self.diagnostics.append(error(
                    self.src.path, Span.point(line, col), UNTERMINATED_TEMPLATE,
                    "template literal is never closed"))
                break
            ch = self.peek()
            if ch == "`":
                self.advance()
                break
            if ch == "\\":
                self.advance()
                if not self.at_end():
                    buf.append(self._ESCAPES.get(self.peek(), self.peek()))
                    self.advance()
                continue
            if ch == "$" and self.peek(1) == "{":
                flush()
                self.advance(); self.advance()
                hole = self.scan_tokens(stop_at="}")
                parts.append(("tokens", hole))
                if self.at_end():
                    self.diagnostics.append(error(
                        self.src.path, Span.point(line, col),
                        UNTERMINATED_TEMPLATE, "template hole is never closed"))
                    break
                self.advance()  # closing }
                continue
            buf.append(self.advance())
        flush()
        text = self.src.slice(Span(line, col, self.line, self.col))
        return Token(TEMPLATE, text, line, col, self.line, self.col, value=parts)


def lex(source: SourceFile) -> tuple[list[Token], list[Diagnostic]]:
    scanner = _Scanner(source)
    tokens = scanner.scan_tokens()
    return tokens, scanner.diagnostics
