"""Whole-project model construction.

``build_scene`` turns a parsed project into a Scene: every file becomes an
ArkFile, declarations become ArkClass/ArkMethod/ArkField with canonical
signatures, the stub SDK is merged in, and every method body is lowered to
the three-address IR (both the pre-desugar and the final form).

Structural conventions:

* top-level functions and variables live on a per-file default class named
  ``%dflt``; namespaces get their own default class for namespace-level
  functions;
* classes with fields and no written constructor get a synthesized one, so
  field initializers always have a body to run in (initializer stores are
  prepended to constructor bodies, inherited fields first);
* functions hoisted out of expressions (``Anonymous_%N``) land on the
  file's default class after the main lowering pass;
* name resolution walks the namespace chain, then explicit imports, then
  falls back to a unique project-wide match.
"""

from __future__ import annotations

import json
import os
import posixpath
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from . import astnodes as A
from .astnodes import AstNode
from .diagnostics import (
    DUPLICATE_MEMBER,
    EMPTY_PROJECT,
    Diagnostic,
    HierarchyError,
    SceneError,
    Span,
    UNSUPPORTED_SYNTAX,
    warning,
)
from .ir import (
    ArkBody,
    DesugarHooks,
    FieldRef,
    Lowerer,
    LoweringContext,
    ThisRef,
    build_cfg,
    desugar,
    linearize,
)
from .ir.lowering import seed_counters
from .project import ParsedFile, ParsedProject, parse_source
from .scenemodel import (
    ArkClass,
    ArkField,
    ArkFile,
    ArkMethod,
    ArkNamespace,
    ClassSignature,
    CONSTRUCTOR,
    DEFAULT_CLASS,
    Decorator,
    Hierarchy,
    MethodSignature,
    Param,
)
from .viewtree import build_view_tree

PACKAGED_STUBS = Path(__file__).parent / "stubs"
STUB_PREFIX = "%sdk"
SYNTH_STUB_FILE = f"{STUB_PREFIX}/components.ets"


@dataclass
class SceneConfig:
    root: str = "."
    include: list[str] = dc_field(default_factory=lambda: ["**/*.ets", "**/*.ts"])
    stubs: str | None = None
    entry_points: list[str] = dc_field(default_factory=list)

    @classmethod
    def from_json(cls, data: dict, base_dir: str = ".") -> "SceneConfig":
        cfg = cls()
        if "root" in data:
            cfg.root = os.path.normpath(os.path.join(base_dir, data["root"]))
        else:
            cfg.root = base_dir
        if "include" in data:
            cfg.include = list(data["include"])
        if "stubs" in data and data["stubs"]:
            cfg.stubs = os.path.normpath(os.path.join(base_dir, data["stubs"]))
        cfg.entry_points = list(data.get("entryPoints", []))
        return cfg

    @classmethod
    def from_file(cls, path: str) -> "SceneConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls.from_json(data, base_dir=os.path.dirname(os.path.abspath(path)))


@dataclass
class Scene:
    config: SceneConfig
    files: list[ArkFile] = dc_field(default_factory=list)
    stub_files: list[ArkFile] = dc_field(default_factory=list)
    class_index: dict[str, ArkClass] = dc_field(default_factory=dict)
    method_index: dict[str, ArkMethod] = dc_field(default_factory=dict)
    diagnostics: list[Diagnostic] = dc_field(default_factory=list)
    _scope_classes: dict = dc_field(default_factory=dict, repr=False)
    _scope_namespaces: dict = dc_field(default_factory=dict, repr=False)
    _by_name: dict = dc_field(default_factory=dict, repr=False)
    _files_by_path: dict = dc_field(default_factory=dict, repr=False)

    # ------------------------------------------------------------ lookups

    def all_files(self) -> list[ArkFile]:
        return self.files + self.stub_files

    def all_classes(self) -> list[ArkClass]:
        out = []
        for file in self.all_files():
            out.extend(file.all_classes())
        return out

    def user_classes(self) -> list[ArkClass]:
        return [c for f in self.files for c in f.all_classes()]

    def lookup_class(self, sig: ClassSignature | str) -> ArkClass | None:
        key = sig if isinstance(sig, str) else sig.text()
        return self.class_index.get(key)

    def lookup_method(self, sig: MethodSignature | str) -> ArkMethod | None:
        key = sig if isinstance(sig, str) else sig.text()
        return self.method_index.get(key)

    def find_methods(self, text: str) -> list[ArkMethod]:
        """Match a full canonical signature or a file-less shorthand like
        ``ns.Class.method/2``."""
        if ": " in text:
            found = self.method_index.get(text)
            return [found] if found else []
        out = []
        for key, method in sorted(self.method_index.items()):
            if key.split(": ", 1)[1] == text:
                out.append(method)
        return out

    # --------------------------------------------------------- resolution

    def resolve_class(self, name: str, path: str,
                      ns_path: tuple = ()) -> ArkClass | None:
        for depth in range(len(ns_path), -1, -1):
            scope = (path, ns_path[:depth])
            cls = self._scope_classes.get(scope, {}).get(name)
            if cls is not None:
                return cls
            ns_default = self._scope_namespaces.get(scope, {}).get(name)
            if ns_default is not None:
                return ns_default
        file = self._files_by_path.get(path)
        if file is not None:
            for names, module in file.imports:
                if name in names and module:
                    target = self._resolve_module(path, module)
                    if target is not None:
                        cls = self._scope_classes.get((target.path, ()), {}).get(name)
                        if cls is not None:
                            return cls
        candidates = self._by_name.get(name, [])
        if len(candidates) == 1:
            return candidates[0]
        return None

    def resolver_for(self, path: str, ns_path: tuple = ()):
        def resolve(name: str) -> ClassSignature | None:
            cls = self.resolve_class(name, path, ns_path)
            return cls.signature if cls is not None else None
        return resolve

    def _resolve_module(self, from_path: str, module: str) -> ArkFile | None:
        if not module.startswith("."):
            return None
        base = posixpath.normpath(
            posixpath.join(posixpath.dirname(from_path), module))
        for candidate in (base, base + ".ets", base + ".ts"):
            if candidate in self._files_by_path:
                return self._files_by_path[candidate]
        return None

    def component_info(self, name: str, path: str,
                       ns_path: tuple = ()) -> tuple[str, object]:
        """Classify a component block name; synthesizes a stub builder for
        unknown components (used by the desugarer and the view tree)."""
        cls = self.resolve_class(name, path, ns_path)
        if cls is not None and cls.kind == "struct":
            return "custom", name
        builder = self.resolve_class(name + "Interface", path, ns_path)
        if builder is not None:
            return "system", builder.signature
        return "unknown", self.ensure_component_stub(name)

    def classify_component(self, name: str, path: str) -> tuple[str, object]:
        cls = self.resolve_class(name, path)
        if cls is not None and cls.kind == "struct":
            return "custom", cls.signature
        return "system", None

    def ensure_component_stub(self, name: str) -> ClassSignature:
        """Register a body-less builder class for an unknown component."""
        sig = ClassSignature(SYNTH_STUB_FILE, (), name + "Interface")
        if sig.text() in self.class_index:
            return sig
        stub_file = self._files_by_path.get(SYNTH_STUB_FILE)
        if stub_file is None:
            stub_file = ArkFile(path=SYNTH_STUB_FILE, is_stub=True)
            stub_file.classes.append(
                ArkClass(ClassSignature(SYNTH_STUB_FILE, (), DEFAULT_CLASS),
                         kind="default", is_stub=True))
            self.stub_files.append(stub_file)
            self._files_by_path[SYNTH_STUB_FILE] = stub_file
        cls = ArkClass(sig, kind="class", is_stub=True)
        cls.methods.append(ArkMethod(sig.member("create", 1),
                                     params=[Param("value", optional=True)],
                                     is_static=True, is_abstract=True, is_stub=True))
        cls.methods.append(ArkMethod(sig.member("pop", 0), is_static=True,
                                     is_abstract=True, is_stub=True))
        stub_file.classes.append(cls)
        self._register_class(cls)
        return sig

    def _register_class(self, cls: ArkClass) -> None:
        key = cls.signature.text()
        other = self.class_index.get(key)
        if other is not None:
            raise SceneError(
                f"duplicate class {key}: declared at "
                f"{other.span.start_line}:{other.span.start_col} and "
                f"{cls.span.start_line}:{cls.span.start_col}")
        self.class_index[key] = cls
        scope = (cls.signature.file, cls.signature.namespace)
        self._scope_classes.setdefault(scope, {})[cls.name] = cls
        if cls.name != DEFAULT_CLASS:
            self._by_name.setdefault(cls.name, []).append(cls)
        for method in cls.methods:
            self.method_index[method.signature.text()] = method

    def _register_method(self, method: ArkMethod) -> None:
        self.method_index[method.signature.text()] = method

    # ------------------------------------------------------- entry points

    def default_entry_points(self) -> list[MethodSignature]:
        out = []
        for file in self.files:
            for cls in file.all_classes():
                for method in cls.methods:
                    if method.name == "main":
                        out.append(method.signature)
                if cls.kind == "struct" and cls.has_decorator("Entry"):
                    build = cls.find_method("build")
                    if build is not None:
                        out.append(build.signature)
        return sorted(out)


def build_scene(project: ParsedProject, config: SceneConfig | None = None) -> Scene:
    if config is None:
        config = SceneConfig(root=project.root)
    if not project.files:
        raise SceneError("project contains no source files", EMPTY_PROJECT)
    builder = _SceneBuilder(project, config)
    return builder.run()


class _SceneBuilder:
    def __init__(self, project: ParsedProject, config: SceneConfig):
        self.project = project
        self.config = config
        self.scene = Scene(config)
        self.scene.diagnostics.extend(project.diagnostics)
        self.hoist_queue: list = []

    # ------------------------------------------------------------ driver

    def run(self) -> Scene:
        scene = self.scene
        for parsed in self._stub_sources():
            file = self._build_file(parsed, is_stub=True)
            scene.stub_files.append(file)
            scene._files_by_path[file.path] = file
        for parsed in self.project.files:
            scene.diagnostics.extend(parsed.diagnostics)
            file = self._build_file(parsed, is_stub=False)
            scene.files.append(file)
            scene._files_by_path[file.path] = file
        for file in scene.all_files():
            for cls in file.all_classes():
                scene._register_class(cls)
        self._synthesize_constructors()
        for file in scene.files:
            for cls in file.all_classes():
                for method in list(cls.methods):
                    self._lower(file, cls, method)
            self._drain_hoists(file)
        self._build_view_trees()
        return scene

    # ------------------------------------------------------ stub loading

    def _stub_sources(self) -> list[ParsedFile]:
        dirs = [PACKAGED_STUBS]
        env_dir = os.environ.get("ARKLIGHT_STUBS")
        if env_dir:
            dirs.append(Path(env_dir))
        if self.config.stubs:
            dirs.append(Path(self.config.stubs))
        out = []
        for directory in dirs:
            if not directory.is_dir():
                continue
            for path in sorted(directory.glob("*.ets")):
                text = path.read_text(encoding="utf-8")
                out.append(parse_source(f"{STUB_PREFIX}/{path.name}", text))
        return out

    # ------------------------------------------------- structural pass

    def _build_file(self, parsed: ParsedFile, is_stub: bool) -> ArkFile:
        file = ArkFile(path=parsed.path, is_stub=is_stub)
        default = ArkClass(ClassSignature(parsed.path, (), DEFAULT_CLASS),
                           kind="default", is_stub=is_stub)
        file.classes.append(default)
        self._build_scope(parsed.module.children, file, None, (), default, is_stub)
        return file

    def _build_scope(self, decls: list[AstNode], file: ArkFile,
                     namespace: ArkNamespace | None, ns_path: tuple,
                     default: ArkClass, is_stub: bool) -> None:
        container = namespace.classes if namespace is not None else file.classes
        namespaces = namespace.nested if namespace is not None else file.namespaces
        for decl in decls:
            kind = decl.kind
            if kind == A.IMPORT_DECL:
                file.imports.append((tuple(decl.attrs["names"]),
                                     decl.attrs.get("module")))
            elif kind == A.CLASS_DECL:
                container.append(
                    self._build_class(decl, file.path, ns_path, is_stub))
            elif kind == A.NAMESPACE_DECL:
                name = decl.attrs["name"]
                existing = next((n for n in namespaces if n.name == name), None)
                if existing is None:
                    existing = ArkNamespace(
                        name, decorators=self._decorators(decl.attrs["decorators"]))
                    nested_path = ns_path + (name,)
                    nested_default = ArkClass(
                        ClassSignature(file.path, nested_path, DEFAULT_CLASS),
                        kind="default", is_stub=is_stub)
                    existing.classes.append(nested_default)
                    namespaces.append(existing)
                    self.scene._scope_namespaces.setdefault(
                        (file.path, ns_path), {})[name] = nested_default
                nested_path = ns_path + (name,)
                nested_default = next(
                    c for c in existing.classes if c.name == DEFAULT_CLASS)
                self._build_scope(decl.children, file, existing, nested_path,
                                  nested_default, is_stub)
            elif kind == A.FUNCTION_DECL:
                method = self._build_method(decl, default.signature, is_stub,
                                            force_static=True)
                if self._member_ok(default, method):
                    default.methods.append(method)
            elif kind == A.VAR_DECL:
                default.fields.append(self._build_field(
                    decl, default.signature, force_static=True))
            elif kind == A.BLOCK and decl.attr("var_group"):
                for var in decl.children:
                    default.fields.append(self._build_field(
                        var, default.signature, force_static=True))
            else:
                self.scene.diagnostics.append(warning(
                    file.path, decl.span, UNSUPPORTED_SYNTAX,
                    "top-level statements are not analyzed"))

    def _build_class(self, decl: AstNode, path: str, ns_path: tuple,
                     is_stub: bool) -> ArkClass:
        sig = ClassSignature(path, ns_path, decl.attrs["name"])
        cls = ArkClass(
            sig, kind=decl.attrs["kind"],
            superclass_name=decl.attrs.get("superclass"),
            interface_names=list(decl.attrs.get("interfaces") or []),
            decorators=self._decorators(decl.attrs["decorators"]),
            is_stub=is_stub, span=decl.span)
        for member in decl.children:
            if member.kind == A.FIELD_DECL:
                fld = self._build_field(member, sig)
                if cls.find_field(fld.name) is not None:
                    self.scene.diagnostics.append(warning(
                        path, member.span, DUPLICATE_MEMBER,
                        f"duplicate field '{fld.name}' in {cls.name}"))
                    continue
                cls.fields.append(fld)
            elif member.kind == A.METHOD_DECL:
                method = self._build_method(member, sig, is_stub)
                if self._member_ok(cls, method):
                    cls.methods.append(method)
        return cls

    def _member_ok(self, cls: ArkClass, method: ArkMethod) -> bool:
        name, arity = method.name, method.signature.arity
        if any(m.name == name and m.signature.arity == arity for m in cls.methods):
            self.scene.diagnostics.append(warning(
                cls.signature.file, method.span, DUPLICATE_MEMBER,
                f"duplicate method '{name}/{arity}' in {cls.name}"))
            return False
        return True

    def _build_method(self, decl: AstNode, owner: ClassSignature, is_stub: bool,
                      force_static: bool = False) -> ArkMethod:
        params = [Param(p.attrs["name"], p.attrs.get("type"),
                        optional=p.attrs["optional"], rest=p.attrs["rest"],
                        span=p.span)
                  for p in decl.attrs["params"]]
        return ArkMethod(
            owner.member(decl.attrs["name"], len(params)),
            params=params,
            return_anno=decl.attrs.get("return_type"),
            decorators=self._decorators(decl.attrs.get("decorators") or []),
            is_static=force_static or bool(decl.attrs.get("static")),
            is_abstract=decl.attrs.get("body") is None,
            is_stub=is_stub,
            span=decl.span,
            ast=decl)

    def _build_field(self, decl: AstNode, owner: ClassSignature,
                     force_static: bool = False) -> ArkField:
        return ArkField(
            decl.attrs["name"], owner,
            type_anno=decl.attrs.get("type"),
            decorators=self._decorators(decl.attrs.get("decorators") or []),
            initializer=decl.attrs.get("init"),
            is_static=force_static or bool(decl.attrs.get("static")),
            span=decl.span)

    @staticmethod
    def _decorators(nodes: list[AstNode]) -> list[Decorator]:
        out = []
        for node in nodes:
            args = tuple(a.attrs["value"] if a.kind == A.LITERAL else None
                         for a in node.attrs.get("args") or [])
            out.append(Decorator(node.attrs["name"], args))
        return out

    # ------------------------------------------------------ constructors

    def _class_chain(self, cls: ArkClass) -> list[ArkClass]:
        """cls and its resolvable superclass ancestors, outermost first."""
        chain = [cls]
        seen = {cls.signature}
        current = cls
        while current.superclass_name:
            parent = self.scene.resolve_class(
                current.superclass_name, current.signature.file,
                current.signature.namespace)
            if parent is None or parent.signature in seen:
                break
            if parent.kind == "interface":
                break
            chain.append(parent)
            seen.add(parent.signature)
            current = parent
        chain.reverse()
        return chain

    def _synthesize_constructors(self) -> None:
        for file in self.scene.files:
            for cls in file.all_classes():
                if cls.kind in ("interface", "default") or cls.is_synthetic:
                    continue
                if cls.find_method(CONSTRUCTOR) is not None:
                    continue
                if any(c.fields for c in self._class_chain(cls)):
                    ctor = ArkMethod(cls.signature.member(CONSTRUCTOR, 0),
                                     span=cls.span)
                    cls.methods.append(ctor)
                    self.scene._register_method(ctor)

    # ----------------------------------------------------------- lowering

    def _make_context(self, file: ArkFile, owner: ArkClass) -> LoweringContext:
        sig = owner.signature
        return LoweringContext(
            path=file.path,
            resolve=self.scene.resolver_for(sig.file, sig.namespace),
            has_constructor=self._has_constructor_fn(sig),
            diagnostics=self.scene.diagnostics)

    def _has_constructor_fn(self, owner: ClassSignature):
        def has_ctor(name: str) -> bool:
            cls = self.scene.resolve_class(name, owner.file, owner.namespace)
            return cls is not None and cls.find_method(CONSTRUCTOR) is not None
        return has_ctor

    def _lower_stream(self, file: ArkFile, cls: ArkClass, method: ArkMethod,
                      param_names: list[str]) -> tuple[list, LoweringContext]:
        ctx = self._make_context(file, cls)
        ctx.declared.update(param_names)
        body_ast = method.ast.attrs.get("body") if method.ast is not None else None
        seed_counters(ctx, param_names, body_ast)
        is_ctor = method.name == CONSTRUCTOR and not cls.is_synthetic
        lowerer = Lowerer(ctx)
        if is_ctor:
            own_resolver = ctx.resolve
            for owner_cls in self._class_chain(cls):
                init_fields = [f for f in owner_cls.fields
                               if f.initializer is not None and not f.is_static]
                if not init_fields:
                    continue
                ctx.resolve = self.scene.resolver_for(
                    owner_cls.signature.file, owner_cls.signature.namespace)
                for fld in init_fields:
                    seed_counters(ctx, [], fld.initializer)
                    lowerer.lower_into(FieldRef(ThisRef(), fld.name),
                                       fld.initializer, fld.span)
            ctx.resolve = own_resolver
        if body_ast is not None:
            lowerer.lower_block(body_ast)
        return lowerer.result(), ctx

    def _lower(self, file: ArkFile, cls: ArkClass, method: ArkMethod,
               outer_env: frozenset = frozenset()) -> None:
        if method.is_stub:
            return
        body_ast = method.ast.attrs.get("body") if method.ast is not None else None
        synthesized_ctor = method.name == CONSTRUCTOR and method.ast is None
        if body_ast is None and not synthesized_ctor:
            return
        param_names = [p.name for p in method.params]
        original_stream, _ = self._lower_stream(file, cls, method, param_names)
        stream, ctx = self._lower_stream(file, cls, method, param_names)
        hooks = self._hooks_for(file, cls, ctx, outer_env)
        core = desugar(stream, ctx, hooks, file.path, self.scene.diagnostics)
        body = ArkBody(
            signature=method.signature,
            original_cfg=linearize(original_stream),
            cfg=build_cfg(core),
            params=param_names,
            source_locals=ctx.source_locals,
            declared_types=ctx.declared_types)
        method.body = body

    def _hooks_for(self, file: ArkFile, owner: ArkClass, ctx: LoweringContext,
                   outer_env: frozenset) -> DesugarHooks:
        def fresh_anon() -> str:
            name = f"Anonymous_{file.anon_counter}"
            file.anon_counter += 1
            return name

        def hoist(name: str, fn_ast: AstNode, captures: list[str],
                  uses_this: bool) -> None:
            self.hoist_queue.append(
                (file, owner, name, fn_ast, captures, uses_this,
                 frozenset(ctx.declared)))

        def synth_object_class(name: str, fields: list[str], span: Span) -> None:
            sig = ClassSignature(file.path, (), name)
            cls = ArkClass(sig, kind="class", is_synthetic=True, span=span)
            cls.fields = [ArkField(f, sig, span=span) for f in fields]
            file.classes.append(cls)
            self.scene._register_class(cls)

        def component_info(name: str) -> tuple[str, object]:
            return self.scene.component_info(name, file.path)

        return DesugarHooks(
            fresh_anon=fresh_anon,
            hoist_function=hoist,
            synth_object_class=synth_object_class,
            component_info=component_info,
            outer_env=outer_env)

    def _drain_hoists(self, file: ArkFile) -> None:
        while self.hoist_queue:
            file_, owner, name, fn_ast, captures, uses_this, env = \
                self.hoist_queue.pop(0)
            params = [Param(p.attrs["name"], p.attrs.get("type"),
                            optional=p.attrs["optional"], rest=p.attrs["rest"],
                            span=p.span)
                      for p in fn_ast.attrs["params"]]
            arity = len(params) + len(captures)
            method = ArkMethod(
                owner.signature.member(name, arity),
                params=params + [Param(c) for c in captures],
                is_static=not uses_this, span=fn_ast.span,
                ast=self._function_ast(fn_ast))
            owner.methods.append(method)
            self.scene._register_method(method)
            self._lower(file_, owner, method, outer_env=env)

    @staticmethod
    def _function_ast(fn_ast: AstNode) -> AstNode:
        """Normalize an arrow/anonymous fn into a method-shaped node."""
        body = fn_ast.children[0]
        if fn_ast.attrs.get("expr_body"):
            ret = AstNode(A.RETURN_STMT, body.span, [body])
            body = AstNode(A.BLOCK, body.span, [ret])
        node = AstNode(A.METHOD_DECL, fn_ast.span)
        node.attrs.update(name="", static=True, params=fn_ast.attrs["params"],
                          return_type=None, body=body, decorators=[],
                          abstract=False)
        return node

    # ---------------------------------------------------------- viewtrees

    def _build_view_trees(self) -> None:
        for file in self.scene.files:
            for cls in file.all_classes():
                if cls.kind != "struct":
                    continue
                build = cls.find_method("build")
                if build is None or build.body is None:
                    continue
                classify = lambda name, _p=file.path: \
                    self.scene.classify_component(name, _p)
                cls.view_tree = build_view_tree(cls, classify)


def get_class_hierarchy(scene: Scene) -> Hierarchy:
    """Parent -> children relation over every class in the scene.

    Superclass and interface-implementation links both count as edges.
    Unresolvable parent names are recorded and the class stays a root.
    Inheritance cycles raise HierarchyError naming the cycle.
    """
    hierarchy = Hierarchy()
    classes = sorted(scene.all_classes(), key=lambda c: c.signature)
    for cls in classes:
        sig = cls.signature
        parents: list[ClassSignature] = []
        names = ([cls.superclass_name] if cls.superclass_name else []) \
            + list(cls.interface_names)
        for name in names:
            parent = scene.resolve_class(name, sig.file, sig.namespace)
            if parent is None:
                hierarchy.unresolved.append((sig, name))
            else:
                parents.append(parent.signature)
        hierarchy.parents[sig] = parents
        for parent_sig in parents:
            hierarchy.children.setdefault(parent_sig, []).append(sig)
        if not parents:
            hierarchy.roots.append(sig)

    state: dict[ClassSignature, int] = {}

    def visit(sig: ClassSignature, trail: list[ClassSignature]) -> None:
        state[sig] = 1
        trail.append(sig)
        for parent in hierarchy.parents.get(sig, []):
            if state.get(parent) == 1:
                cycle = trail[trail.index(parent):] + [parent]
                names = " -> ".join(s.name for s in cycle)
                raise HierarchyError(f"inheritance cycle: {names}")
            if state.get(parent, 0) == 0:
                visit(parent, trail)
        trail.pop()
        state[sig] = 2

    for cls in classes:
        if state.get(cls.signature, 0) == 0:
            visit(cls.signature, [])
    return hierarchy
