"""Diagnostics, source spans, and the error hierarchy shared by all passes.

Every pass reports problems as `Diagnostic` records rendered in the common
`path:line:col: severity[CODE]: message` shape so that CLI output can be
sorted and compared byte-for-byte. Unrecoverable conditions (empty project,
hierarchy cycles, bad CLI targets, ...) raise exceptions from the
`ArkLightError` family instead.
"""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"

# Diagnostic codes. Kept in one place so tests can refer to them.
UNEXPECTED_TOKEN = "UNEXPECTED_TOKEN"
UNSUPPORTED_SYNTAX = "UNSUPPORTED_SYNTAX"
UNTERMINATED_STRING = "UNTERMINATED_STRING"
UNTERMINATED_COMMENT = "UNTERMINATED_COMMENT"
UNTERMINATED_TEMPLATE = "UNTERMINATED_TEMPLATE"
UNREADABLE_FILE = "UNREADABLE_FILE"
DUPLICATE_CLASS = "DUPLICATE_CLASS"
DUPLICATE_MEMBER = "DUPLICATE_MEMBER"
UNKNOWN_COMPONENT = "UNKNOWN_COMPONENT"
CAPTURE_UNSUPPORTED = "CAPTURE_UNSUPPORTED"
MAYBE_UNDEFINED = "MAYBE_UNDEFINED"
NO_ANY = "NO_ANY"
IMPLICIT_ANY = "IMPLICIT_ANY"
NO_LAYOUT_CHANGE = "NO_LAYOUT_CHANGE"
OPERATOR_SEMANTICS = "OPERATOR_SEMANTICS"
UNKNOWN_TARGET = "UNKNOWN_TARGET"


@dataclass(frozen=True, order=True)
class Span:
    """Half-open source region; lines and columns are 1-based."""

    start_line: int
    start_col: int
    end_line: int
    end_col: int

    @staticmethod
    def point(line: int, col: int) -> "Span":
        return Span(line, col, line, col)

    def cover(self, other: "Span") -> "Span":
        """Smallest span containing both self and other."""
        start = min((self.start_line, self.start_col), (other.start_line, other.start_col))
        end = max((self.end_line, self.end_col), (other.end_line, other.end_col))
        return Span(start[0], start[1], end[0], end[1])


@dataclass(frozen=True, order=True)
class Diagnostic:
    path: str
    span: Span
    severity: str
    code: str
    message: str

    def render(self) -> str:
        return (
            f"{self.path}:{self.span.start_line}:{self.span.start_col}: "
            f"{self.severity}[{self.code}]: {self.message}"
        )


def error(path: str, span: Span, code: str, message: str) -> Diagnostic:
    return Diagnostic(path, span, ERROR, code, message)


def warning(path: str, span: Span, code: str, message: str) -> Diagnostic:
    return Diagnostic(path, span, WARNING, code, message)


def render_all(diags: list[Diagnostic]) -> str:
    return "\n".join(d.render() for d in sorted(diags))


class ArkLightError(Exception):
    """Base for unrecoverable analysis errors."""

    code = "ARKLIGHT_ERROR"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class SceneError(ArkLightError):
    code = "SCENE_ERROR"


class HierarchyError(ArkLightError):
    code = "HIERARCHY_ERROR"


class LoweringError(ArkLightError):
    code = "LOWERING_ERROR"


class CfgError(ArkLightError):
    code = "CFG_ERROR"


class ViewTreeError(ArkLightError):
    code = "VIEWTREE_ERROR"


class CgError(ArkLightError):
    code = "CG_ERROR"


class SupergraphError(ArkLightError):
    code = "SUPERGRAPH_ERROR"


EMPTY_PROJECT = "EMPTY_PROJECT"
