"""Constraint lints over a built scene.

Checks the statically-checkable slice of the language restrictions: no
explicit `any` annotations, no inferred `any` from conflicting assignments,
no stores to fields absent from the declared class shape, unary plus only
on numbers, and reads that no definition reaches.
"""

from __future__ import annotations

from ..astnodes import TYPE_ANNO
from ..diagnostics import (
    Diagnostic,
    NO_ANY,
    NO_LAYOUT_CHANGE,
    OPERATOR_SEMANTICS,
    warning,
)
from ..ir import Assign, FieldRef, UnaryExpr
from .defuse import build_def_use
from .typeinfer import NUMBER, TypeInference, is_concrete


def _any_annotations(path: str, anno, out: list[Diagnostic]) -> None:
    if anno is None:
        return
    for node in anno.walk():
        if node.kind == TYPE_ANNO and node.attrs.get("name") == "any":
            out.append(warning(path, node.span, NO_ANY,
                               "explicit any defeats static typing"))


def check_constraints(scene, table3_literal: bool = True) -> list[Diagnostic]:
    """Lint every user method; returns sorted diagnostics."""
    engine = TypeInference(scene, table3_literal)
    out: list[Diagnostic] = []
    for file in scene.files:
        for cls in file.all_classes():
            path = cls.signature.file
            for fld in cls.fields:
                _any_annotations(path, fld.type_anno, out)
            for method in cls.methods:
                for param in method.params:
                    _any_annotations(path, param.type_anno, out)
                _any_annotations(path, method.return_anno, out)
                body = method.body
                if body is None or body.cfg is None:
                    continue
                for anno in body.declared_types.values():
                    _any_annotations(path, anno, out)
                chain = body.def_use if body.def_use is not None \
                    else build_def_use(body)
                out.extend(chain.diagnostics)
                types = engine.infer_body(body)
                _lint_body(engine, body, types, path, out)
    out.extend(engine.diagnostics)
    return sorted(out)


def _lint_body(engine: TypeInference, body, types: dict, path: str,
               out: list[Diagnostic]) -> None:
    for stmt in body.cfg.stmts():
        if not isinstance(stmt, Assign):
            continue
        if isinstance(stmt.lhs, FieldRef):
            target = engine.class_of_base(stmt.lhs.base, types, body)
            if (target is not None and target.kind != "default"
                    and not engine.has_field(target, stmt.lhs.field)):
                out.append(warning(
                    path, stmt.span, NO_LAYOUT_CHANGE,
                    f"field '{stmt.lhs.field}' is not declared on"
                    f" {target.name}"))
        if isinstance(stmt.rhs, UnaryExpr) and stmt.rhs.op == "+":
            operand = engine.value_type(stmt.rhs.operand, types, body)
            if is_concrete(operand) and operand != NUMBER:
                out.append(warning(
                    path, stmt.span, OPERATOR_SEMANTICS,
                    f"unary '+' applied to {operand.text()} operand"))
