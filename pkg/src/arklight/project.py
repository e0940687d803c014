"""Whole-project parsing: deterministic file discovery plus per-file parses."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .astnodes import AstNode
from .diagnostics import Diagnostic, Span, UNREADABLE_FILE, error
from .lexer import SourceFile
from .parser import parse

DEFAULT_INCLUDE = ("**/*.ets", "**/*.ts")


@dataclass
class ParsedFile:
    source: SourceFile
    module: AstNode
    diagnostics: list[Diagnostic]

    @property
    def path(self) -> str:
        return self.source.path


@dataclass
class ParsedProject:
    root: str
    files: list[ParsedFile]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def all_diagnostics(self) -> list[Diagnostic]:
        out = list(self.diagnostics)
        for f in self.files:
            out.extend(f.diagnostics)
        return sorted(out)


def discover_files(root: str | Path, include: tuple[str, ...] = DEFAULT_INCLUDE) -> list[str]:
    """Project-relative paths matching the include globs, sorted, deduped."""
    base = Path(root)
    found: set[str] = set()
    for pattern in include:
        for path in base.glob(pattern):
            if path.is_file():
                found.add(path.relative_to(base).as_posix())
    return sorted(found)


def parse_source(path: str, text: str) -> ParsedFile:
    source = SourceFile(path, text)
    module, diagnostics = parse(source)
    return ParsedFile(source, module, diagnostics)


def parse_project(root: str | Path,
                  include: tuple[str, ...] = DEFAULT_INCLUDE) -> ParsedProject:
    """Parse every included file under root in lexicographic path order.

    A file that fails to parse is retained with its diagnostics and whatever
    module contents recovery salvaged; an unreadable file is skipped with a
    project-level diagnostic.
    """
    base = Path(root)
    project = ParsedProject(str(root), [])
    for rel in discover_files(base, include):
        try:
            text = (base / rel).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            project.diagnostics.append(error(
                rel, Span.point(1, 1), UNREADABLE_FILE,
                f"cannot read file: {exc.__class__.__name__}"))
            continue
        project.files.append(parse_source(rel, text))
    return project
