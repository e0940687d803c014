"""Scene data model: signatures and the class/method/field project structure.

Signatures are the stable identities used everywhere downstream (call graphs,
IFDS, the CLI). Canonical text forms:

    ClassSignature   ->  "<file>: <ns path.>Class"
    MethodSignature  ->  "<file>: <ns path.>Class.method/<arity>"

Top-level functions and variables of a file belong to a synthetic default
class named ``%dflt`` (one per file, and one per namespace for
namespace-level functions). The ``%`` prefix cannot be produced by source
identifiers, so synthetic names never collide with user code.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .astnodes import AstNode
from .diagnostics import Span

DEFAULT_CLASS = "%dflt"
CONSTRUCTOR = "constructor"


@dataclass(frozen=True, order=True)
class ClassSignature:
    file: str
    namespace: tuple[str, ...]
    name: str

    def text(self) -> str:
        return f"{self.file}: {'.'.join(self.namespace + (self.name,))}"

    def member(self, method: str, arity: int) -> "MethodSignature":
        return MethodSignature(self, method, arity)


@dataclass(frozen=True, order=True)
class MethodSignature:
    cls: ClassSignature
    name: str
    arity: int

    def text(self) -> str:
        return f"{self.cls.text()}.{self.name}/{self.arity}"


def parse_signature_text(text: str) -> MethodSignature:
    """Parse the canonical "file: ns.Class.method/arity" form.

    Raises ValueError on malformed input. A missing "file: " prefix is
    allowed (shorthand form); the file component is then "".
    """
    if ": " in text:
        file, rest = text.split(": ", 1)
    else:
        file, rest = "", text
    if "/" not in rest:
        raise ValueError(f"signature {text!r} is missing '/arity'")
    qual, arity_text = rest.rsplit("/", 1)
    try:
        arity = int(arity_text)
    except ValueError:
        raise ValueError(f"signature {text!r} has a non-numeric arity") from None
    parts = qual.split(".")
    if len(parts) < 2:
        raise ValueError(f"signature {text!r} needs at least Class.method")
    method = parts[-1]
    cls_name = parts[-2]
    namespace = tuple(parts[:-2])
    return MethodSignature(ClassSignature(file, namespace, cls_name), method, arity)


@dataclass(frozen=True)
class Decorator:
    name: str
    args: tuple = ()


@dataclass
class Param:
    name: str
    type_anno: AstNode | None = None
    optional: bool = False
    rest: bool = False
    span: Span = Span.point(1, 1)


@dataclass
class ArkField:
    name: str
    owner: ClassSignature
    type_anno: AstNode | None = None
    decorators: list[Decorator] = field(default_factory=list)
    initializer: AstNode | None = None
    is_static: bool = False
    span: Span = Span.point(1, 1)

    def has_decorator(self, name: str) -> bool:
        return any(d.name == name for d in self.decorators)


@dataclass
class ArkMethod:
    signature: MethodSignature
    params: list[Param] = field(default_factory=list)
    return_anno: AstNode | None = None
    decorators: list[Decorator] = field(default_factory=list)
    is_static: bool = False
    is_abstract: bool = False
    is_stub: bool = False
    span: Span = Span.point(1, 1)
    ast: AstNode | None = None          # MethodDecl/FunctionDecl, if from source
    body: "object | None" = None        # ArkBody once lowered

    @property
    def name(self) -> str:
        return self.signature.name

    def min_arity(self) -> int:
        return sum(1 for p in self.params if not p.optional and not p.rest)

    def max_arity(self) -> int | None:
        """None means unbounded (rest parameter)."""
        if any(p.rest for p in self.params):
            return None
        return len(self.params)

    def accepts(self, argc: int) -> bool:
        upper = self.max_arity()
        return argc >= self.min_arity() and (upper is None or argc <= upper)


@dataclass
class ArkClass:
    signature: ClassSignature
    kind: str                            # class | struct | interface | default
    superclass_name: str | None = None
    interface_names: list[str] = field(default_factory=list)
    fields: list[ArkField] = field(default_factory=list)
    methods: list[ArkMethod] = field(default_factory=list)
    decorators: list[Decorator] = field(default_factory=list)
    view_tree: "ViewTree | None" = None
    is_stub: bool = False
    is_synthetic: bool = False           # desugar-created anonymous class
    span: Span = Span.point(1, 1)

    @property
    def name(self) -> str:
        return self.signature.name

    def has_decorator(self, name: str) -> bool:
        return any(d.name == name for d in self.decorators)

    def find_method(self, name: str, argc: int | None = None) -> ArkMethod | None:
        """Own method by name; if argc is given, it must be accepted."""
        for m in self.methods:
            if m.name == name and (argc is None or m.accepts(argc)):
                return m
        return None

    def find_field(self, name: str) -> ArkField | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None


@dataclass
class ArkNamespace:
    name: str
    classes: list[ArkClass] = field(default_factory=list)
    nested: list["ArkNamespace"] = field(default_factory=list)
    decorators: list[Decorator] = field(default_factory=list)


@dataclass
class ArkFile:
    path: str
    classes: list[ArkClass] = field(default_factory=list)
    namespaces: list[ArkNamespace] = field(default_factory=list)
    imports: list[tuple[tuple[str, ...], str]] = field(default_factory=list)
    is_stub: bool = False
    anon_counter: int = 0

    @property
    def default_class(self) -> ArkClass:
        for cls in self.classes:
            if cls.name == DEFAULT_CLASS:
                return cls
        raise KeyError(f"{self.path} has no default class")

    def all_classes(self) -> list[ArkClass]:
        out = list(self.classes)
        stack = list(self.namespaces)
        while stack:
            ns = stack.pop()
            out.extend(ns.classes)
            stack.extend(ns.nested)
        return out


@dataclass
class ViewNode:
    component_name: str
    kind: str                            # system | custom
    state_bindings: list[str] = field(default_factory=list)
    children: list["ViewNode"] = field(default_factory=list)
    custom_class: ClassSignature | None = None

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class ViewTree:
    root: ViewNode
    owner: ClassSignature


@dataclass
class Hierarchy:
    """Parent -> children relation over class signatures.

    Edges cover both superclass links and interface implementations. Classes
    whose superclass name cannot be resolved are flagged and treated as
    roots.
    """

    children: dict[ClassSignature, list[ClassSignature]] = field(default_factory=dict)
    parents: dict[ClassSignature, list[ClassSignature]] = field(default_factory=dict)
    roots: list[ClassSignature] = field(default_factory=list)
    unresolved: list[tuple[ClassSignature, str]] = field(default_factory=list)

    def children_of(self, sig: ClassSignature) -> list[ClassSignature]:
        return self.children.get(sig, [])

    def cone(self, sig: ClassSignature) -> list[ClassSignature]:
        """sig plus all transitive children, in deterministic order."""
        seen = {sig}
        order = [sig]
        queue = [sig]
        while queue:
            current = queue.pop(0)
            for child in self.children.get(current, []):
                if child not in seen:
                    seen.add(child)
                    order.append(child)
                    queue.append(child)
        return order

    def ancestors(self, sig: ClassSignature) -> list[ClassSignature]:
        out: list[ClassSignature] = []
        seen = {sig}
        queue = [sig]
        while queue:
            current = queue.pop(0)
            for parent in self.parents.get(current, []):
                if parent not in seen:
                    seen.add(parent)
                    out.append(parent)
                    queue.append(parent)
        return out
