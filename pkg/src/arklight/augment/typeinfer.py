"""Rule-based intra-procedural type inference with contextual propagation.

Types are per-Local over the whole method: every assignment to a local joins
into its single type, and distinct concrete types collapse to `any` with an
IMPLICIT_ANY diagnostic. The lattice is three levels deep (unknown below
every concrete type below any), so the per-method sweep terminates quickly.

Call results use the callee's declared return annotation when present and
fall back to inferring the callee's own returns (cycles cut to unknown).
No points-to: field types come from declarations only.

The printed row-2 behavior (string*number -> string, boolean*number ->
boolean) is the default; pass table3_literal=False for plain numeric
results on mixed arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..diagnostics import Diagnostic, IMPLICIT_ANY, warning
from ..ir import (
    ArkBody,
    Assign,
    BinaryExpr,
    ClassRef,
    Constant,
    FieldRef,
    ArrayRef,
    FuncRef,
    Invoke,
    Local,
    New,
    Return,
    ThisRef,
    UnaryExpr,
)
from ..scenemodel import ArkClass, ArkMethod, ClassSignature


@dataclass(frozen=True)
class SimpleType:
    name: str

    def text(self) -> str:
        return self.name


@dataclass(frozen=True)
class ClassType:
    signature: ClassSignature

    def text(self) -> str:
        return self.signature.name


@dataclass(frozen=True)
class ArrayType:
    element: object

    def text(self) -> str:
        return f"{self.element.text()}[]"


@dataclass(frozen=True)
class FunctionType:
    params: tuple
    ret: object

    def text(self) -> str:
        args = ", ".join(p.text() for p in self.params)
        return f"({args}) => {self.ret.text()}"


BOOLEAN = SimpleType("boolean")
NUMBER = SimpleType("number")
STRING = SimpleType("string")
NULL = SimpleType("null")
UNDEFINED = SimpleType("undefined")
VOID = SimpleType("void")
ANY = SimpleType("any")
UNKNOWN = SimpleType("unknown")

_PRIMITIVES = {
    "boolean": BOOLEAN, "number": NUMBER, "string": STRING, "null": NULL,
    "undefined": UNDEFINED, "void": VOID, "any": ANY,
}
_CONSTANT_TYPES = {
    "number": NUMBER, "string": STRING, "boolean": BOOLEAN,
    "null": NULL, "undefined": UNDEFINED,
}

COMPARE_OPS = {"==", "!=", "===", "!==", "<", "<=", ">", ">=",
               "in", "instanceof"}
ARITH_OPS = {"+", "-", "*", "/", "%"}


def is_concrete(t) -> bool:
    return t != UNKNOWN and t != ANY


def join(a, b):
    """Lattice join; distinct concrete types meet at any."""
    if a == b:
        return a
    if a == UNKNOWN:
        return b
    if b == UNKNOWN:
        return a
    return ANY


def type_from_annotation(anno, resolve):
    """Convert a parsed type annotation into an inferred type."""
    if anno is None:
        return UNKNOWN
    form = anno.attrs.get("form")
    if form == "array":
        return ArrayType(type_from_annotation(anno.children[0], resolve))
    if form == "function":
        params = tuple(type_from_annotation(c, resolve)
                       for c in anno.children[:-1])
        ret = type_from_annotation(anno.children[-1], resolve)
        return FunctionType(params, ret)
    name = anno.attrs.get("name", "")
    if name in _PRIMITIVES:
        return _PRIMITIVES[name]
    if name == "Array":
        element = (type_from_annotation(anno.children[0], resolve)
                   if anno.children else UNKNOWN)
        return ArrayType(element)
    sig = resolve(name)
    if sig is not None:
        return ClassType(sig)
    return UNKNOWN


def binop_type(op: str, left, right, literal_rules: bool):
    if op in COMPARE_OPS:
        return BOOLEAN
    if op not in ARITH_OPS:
        return UNKNOWN
    pair = {left, right}
    if pair == {STRING, NUMBER}:
        return STRING if literal_rules else NUMBER
    if pair == {BOOLEAN, NUMBER}:
        return BOOLEAN if literal_rules else NUMBER
    if left == NUMBER and right == NUMBER:
        return NUMBER
    if op == "+" and STRING in pair and is_concrete(left) and is_concrete(right):
        return STRING
    if left == ANY or right == ANY:
        return ANY
    if not is_concrete(left) or not is_concrete(right):
        return UNKNOWN
    return NUMBER


class TypeInference:
    """Scene-wide engine; per-method results and return types are cached."""

    def __init__(self, scene, table3_literal: bool = True):
        self.scene = scene
        self.table3_literal = table3_literal
        self.diagnostics: list[Diagnostic] = []
        self._method_types: dict[str, dict] = {}
        self._returns: dict[str, object] = {}
        self._in_progress: set[str] = set()

    # ------------------------------------------------------------ lookups

    def _resolver(self, sig: ClassSignature):
        return self.scene.resolver_for(sig.file, sig.namespace)

    def _owner_class(self, body: ArkBody) -> ArkClass | None:
        return self.scene.lookup_class(body.signature.cls)

    def _class_chain(self, cls: ArkClass | None):
        seen = set()
        while cls is not None and cls.signature not in seen:
            seen.add(cls.signature)
            yield cls
            if not cls.superclass_name:
                return
            cls = self.scene.resolve_class(
                cls.superclass_name, cls.signature.file,
                cls.signature.namespace)

    def _field_type(self, cls: ArkClass | None, name: str):
        for owner in self._class_chain(cls):
            fld = owner.find_field(name)
            if fld is not None:
                return type_from_annotation(
                    fld.type_anno, self._resolver(owner.signature))
        return UNKNOWN

    def _find_method(self, cls: ArkClass | None, name: str,
                     argc: int) -> ArkMethod | None:
        for owner in self._class_chain(cls):
            method = owner.find_method(name, argc)
            if method is not None:
                return method
        return None

    def _surface_class(self, t) -> ArkClass | None:
        """Class whose declared members answer lookups on values of t."""
        if isinstance(t, ClassType):
            return self.scene.lookup_class(t.signature)
        builtin = {ArrayType: "Array", }.get(type(t))
        if builtin is None:
            builtin = {STRING: "String", NUMBER: "Number",
                       BOOLEAN: "Boolean"}.get(t)
        if builtin is not None:
            candidates = self.scene._by_name.get(builtin, [])
            if len(candidates) == 1:
                return candidates[0]
        return None

    # ------------------------------------------------------ return types

    def return_type(self, method: ArkMethod):
        key = method.signature.text()
        if key in self._returns:
            return self._returns[key]
        resolve = self._resolver(method.signature.cls)
        if method.return_anno is not None:
            result = type_from_annotation(method.return_anno, resolve)
        elif method.body is None or method.body.cfg is None:
            result = UNKNOWN
        elif key in self._in_progress:
            return UNKNOWN  # recursion; provisional, not cached
        else:
            types = self.infer_body(method.body)
            result = UNKNOWN
            for stmt in method.body.cfg.stmts():
                if isinstance(stmt, Return):
                    contributed = (VOID if stmt.value is None else
                                   self._value_type(stmt.value, types,
                                                    method.body))
                    result = join(result, contributed)
        self._returns[key] = result
        return result

    # ---------------------------------------------------------- inference

    def infer_body(self, body: ArkBody) -> dict:
        key = body.signature.text()
        cached = self._method_types.get(key)
        if cached is not None:
            return cached
        self._in_progress.add(key)
        try:
            types = self._run_fixpoint(body)
        finally:
            self._in_progress.discard(key)
        self._method_types[key] = types
        body.inferred_types = types
        return types

    def _seed(self, body: ArkBody) -> dict:
        owner_sig = body.signature.cls
        resolve = self._resolver(owner_sig)
        types: dict[str, object] = {}
        method = self.scene.lookup_method(body.signature)
        if method is not None:
            for param in method.params:
                types[param.name] = type_from_annotation(param.type_anno,
                                                         resolve)
        for name, anno in body.declared_types.items():
            declared = type_from_annotation(anno, resolve)
            types[name] = join(types.get(name, UNKNOWN), declared)
        return types

    def _run_fixpoint(self, body: ArkBody) -> dict:
        types = self._seed(body)
        flagged: set[str] = set()
        path = body.signature.cls.file
        for _ in range(2 * max(len(body.locals()), 1) + 2):
            changed = False
            for stmt in body.cfg.stmts():
                name, new = self._stmt_type(stmt, types, body)
                if name is None:
                    continue
                old = types.get(name, UNKNOWN)
                merged = join(old, new)
                if merged != old:
                    types[name] = merged
                    changed = True
                    if (merged == ANY and is_concrete(old) and is_concrete(new)
                            and name not in flagged):
                        flagged.add(name)
                        self.diagnostics.append(warning(
                            path, stmt.span, IMPLICIT_ANY,
                            f"'{name}' joins {old.text()} and {new.text()};"
                            " inferred any"))
            if not changed:
                break
        for name in body.locals():
            types.setdefault(name, UNKNOWN)
        return types

    def _stmt_type(self, stmt, types: dict, body: ArkBody):
        """(local written, contributed type) for one statement."""
        if isinstance(stmt, Assign) and isinstance(stmt.lhs, Local):
            rhs = stmt.rhs
            if isinstance(rhs, BinaryExpr):
                t = binop_type(rhs.op,
                               self._value_type(rhs.left, types, body),
                               self._value_type(rhs.right, types, body),
                               self.table3_literal)
            elif isinstance(rhs, UnaryExpr):
                t = BOOLEAN if rhs.op == "!" else NUMBER
            else:
                t = self._value_type(rhs, types, body)
            return stmt.lhs.name, t
        if isinstance(stmt, Invoke) and isinstance(stmt.result, Local):
            return stmt.result.name, self._invoke_type(stmt, types, body)
        if isinstance(stmt, New) and isinstance(stmt.result, Local):
            if stmt.class_name == "Array":
                return stmt.result.name, ArrayType(UNKNOWN)
            sig = self._resolver(body.signature.cls)(stmt.class_name)
            t = ClassType(sig) if sig is not None else UNKNOWN
            return stmt.result.name, t
        return None, UNKNOWN

    def value_type(self, value, types: dict, body: ArkBody):
        """Public lookup used by the constraint lints."""
        return self._value_type(value, types, body)

    def class_of_base(self, base, types: dict, body: ArkBody) -> ArkClass | None:
        """Declared class behind a field access base, when determinable."""
        if isinstance(base, ThisRef):
            return self._owner_class(body)
        if isinstance(base, ClassRef):
            return self.scene.lookup_class(base.signature)
        t = self._value_type_of_base(base, types, body)
        if isinstance(t, ClassType):
            return self.scene.lookup_class(t.signature)
        return None

    def has_field(self, cls: ArkClass | None, name: str) -> bool:
        return any(owner.find_field(name) is not None
                   for owner in self._class_chain(cls))

    def _value_type(self, value, types: dict, body: ArkBody):
        if isinstance(value, Constant):
            return _CONSTANT_TYPES.get(value.kind, UNKNOWN)
        if isinstance(value, Local):
            return types.get(value.name, UNKNOWN)
        if isinstance(value, ThisRef):
            owner = self._owner_class(body)
            return ClassType(owner.signature) if owner is not None else UNKNOWN
        if isinstance(value, FuncRef):
            return self._func_type(value.name, body)
        if isinstance(value, FieldRef):
            return self._field_ref_type(value, types, body)
        if isinstance(value, ArrayRef):
            base = self._value_type_of_base(value.base, types, body)
            if isinstance(base, ArrayType):
                return base.element
            return UNKNOWN
        return UNKNOWN

    def _value_type_of_base(self, base, types: dict, body: ArkBody):
        if isinstance(base, Local):
            return types.get(base.name, UNKNOWN)
        return self._value_type(base, types, body)

    def _field_ref_type(self, ref: FieldRef, types: dict, body: ArkBody):
        base = ref.base
        if isinstance(base, ClassRef):
            cls = self.scene.lookup_class(base.signature)
            return self._field_type(cls, ref.field)
        if isinstance(base, ThisRef):
            return self._field_type(self._owner_class(body), ref.field)
        base_type = self._value_type_of_base(base, types, body)
        if isinstance(base_type, ArrayType) and ref.field == "length":
            return NUMBER
        surface = self._surface_class(base_type)
        if surface is not None:
            return self._field_type(surface, ref.field)
        return UNKNOWN

    def _func_type(self, name: str, body: ArkBody):
        owner = self._owner_class(body)
        candidates = [m for m in (owner.methods if owner else [])
                      if m.name == name]
        if not candidates:
            file = self.scene._files_by_path.get(body.signature.cls.file)
            if file is not None:
                candidates = [m for m in file.default_class.methods
                              if m.name == name]
        if len(candidates) != 1:
            return UNKNOWN
        method = candidates[0]
        resolve = self._resolver(method.signature.cls)
        params = tuple(type_from_annotation(p.type_anno, resolve)
                       for p in method.params)
        return FunctionType(params, self.return_type(method))

    def _invoke_type(self, stmt: Invoke, types: dict, body: ArkBody):
        argc = len(stmt.args)
        if stmt.base is None:
            held = types.get(stmt.callee)
            if isinstance(held, FunctionType):
                return held.ret
            file = self.scene._files_by_path.get(body.signature.cls.file)
            if file is not None:
                method = file.default_class.find_method(stmt.callee, argc)
                if method is not None:
                    return self.return_type(method)
            return UNKNOWN
        if isinstance(stmt.base, ClassRef):
            cls = self.scene.lookup_class(stmt.base.signature)
            method = self._find_method(cls, stmt.callee, argc)
            return self.return_type(method) if method is not None else UNKNOWN
        if isinstance(stmt.base, ThisRef):
            method = self._find_method(self._owner_class(body),
                                       stmt.callee, argc)
            return self.return_type(method) if method is not None else UNKNOWN
        base_type = self._value_type_of_base(stmt.base, types, body)
        surface = self._surface_class(base_type)
        if surface is not None:
            method = self._find_method(surface, stmt.callee, argc)
            if method is not None:
                return self.return_type(method)
        return UNKNOWN


def infer_types(body: ArkBody, scene, table3_literal: bool = True,
                engine: TypeInference | None = None) -> dict:
    """Infer a type for every local of one method body."""
    if engine is None:
        engine = TypeInference(scene, table3_literal)
    return engine.infer_body(body)
