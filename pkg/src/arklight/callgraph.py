"""Whole-project call graphs: class-hierarchy analysis and rapid type
analysis.

Both algorithms run the same worklist: starting from entry points, every
Invoke in a reached method becomes a CallSite, virtual sites dispatch over
the receiver's hierarchy cone, and newly reached methods feed back in. RTA
additionally restricts the cone to classes actually instantiated (by a New
in reached code) and iterates graph and instantiated set to a joint
fixpoint, so an instantiation hiding behind a filtered edge never resurrects
that edge. SDK stub classes count as always instantiated: the runtime, not
user code, creates them.

Receivers with unknown inferred type fall back to name+arity matching over
every class; those edges are flagged low-confidence rather than dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .augment.defuse import PARAM_DEF, build_def_use
from .augment.typeinfer import (
    ANY,
    ArrayType,
    ClassType,
    FunctionType,
    TypeInference,
    UNKNOWN,
)
from .diagnostics import CgError
from .ir import Assign, ClassRef, FuncRef, Invoke, Local, New, ThisRef
from .scene import Scene, get_class_hierarchy
from .scenemodel import ArkClass, ArkMethod, ClassSignature, MethodSignature

CHA = "cha"
RTA = "rta"


@dataclass
class CallSite:
    id: int
    stmt_id: int
    caller: MethodSignature
    receiver_type: object
    callee_name: str
    arg_count: int
    line: int
    stmt: object = None                  # the Invoke itself

    def describe(self) -> str:
        return f"{self.callee_name}/{self.arg_count}"


@dataclass
class CallGraph:
    algorithm: str
    entry_points: list[MethodSignature]
    nodes: set[MethodSignature] = dc_field(default_factory=set)
    edges: set[tuple[int, MethodSignature, MethodSignature]] = \
        dc_field(default_factory=set)
    unresolved: list[CallSite] = dc_field(default_factory=list)
    low_confidence: set[int] = dc_field(default_factory=set)
    sites: dict[int, CallSite] = dc_field(default_factory=dict)
    instantiated: set[ClassSignature] = dc_field(default_factory=set)

    def edge_pairs(self) -> set[tuple[str, str]]:
        """(caller, callee) signature texts, collapsing per-site multiplicity."""
        return {(caller.text(), callee.text())
                for _, caller, callee in self.edges}

    def callees_of(self, caller: MethodSignature) -> list[MethodSignature]:
        return sorted({callee for _, c, callee in self.edges if c == caller})

    def callees_at(self, site_id: int) -> list[MethodSignature]:
        return sorted({callee for sid, _, callee in self.edges
                       if sid == site_id})


def _resolve_entries(scene: Scene, entry_points) -> list[MethodSignature]:
    if entry_points is None:
        entries = scene.default_entry_points()
    else:
        entries = []
        for item in entry_points:
            if isinstance(item, MethodSignature):
                if scene.lookup_method(item) is None:
                    raise CgError(f"unknown entry point {item.text()}")
                entries.append(item)
                continue
            found = scene.find_methods(item)
            if not found:
                raise CgError(f"unknown entry point {item}")
            if len(found) > 1:
                names = ", ".join(m.signature.text() for m in found)
                raise CgError(f"ambiguous entry point {item}: {names}")
            entries.append(found[0].signature)
    if not entries:
        raise CgError("no entry points: pass --entry or declare main/@Entry")
    out = []
    for sig in entries:
        if sig not in out:
            out.append(sig)
    return out


class _GraphBuilder:
    def __init__(self, scene: Scene, algorithm: str):
        self.scene = scene
        self.algorithm = algorithm
        self.hierarchy = get_class_hierarchy(scene)
        self.types = TypeInference(scene)
        self._site_cache: dict[str, list[CallSite]] = {}
        self._next_site = 0

    # ---------------------------------------------------------- site prep

    def _method_sites(self, method: ArkMethod) -> list[CallSite]:
        key = method.signature.text()
        cached = self._site_cache.get(key)
        if cached is not None:
            return cached
        sites: list[CallSite] = []
        body = method.body
        if body is not None and body.cfg is not None:
            inferred = self.types.infer_body(body)
            if body.def_use is None:
                build_def_use(body)
            for stmt in body.cfg.stmts():
                if not isinstance(stmt, Invoke):
                    continue
                receiver = UNKNOWN
                if isinstance(stmt.base, Local):
                    receiver = inferred.get(stmt.base.name, UNKNOWN)
                site = CallSite(self._next_site, stmt.stmt_id,
                                method.signature, receiver, stmt.callee,
                                len(stmt.args), stmt.span.start_line,
                                stmt=stmt)
                sites.append(site)
                self._next_site += 1
        self._site_cache[key] = sites
        return sites

    # --------------------------------------------------------- resolution

    def _class(self, sig: ClassSignature | None) -> ArkClass | None:
        return self.scene.lookup_class(sig) if sig is not None else None

    def _chain(self, cls: ArkClass | None):
        seen = set()
        while cls is not None and cls.signature not in seen:
            seen.add(cls.signature)
            yield cls
            cls = self.scene.resolve_class(
                cls.superclass_name, cls.signature.file,
                cls.signature.namespace) if cls.superclass_name else None

    def _dispatch(self, cls: ArkClass | None, name: str,
                  argc: int) -> ArkMethod | None:
        """Nearest concrete (or stub-declared) method up the superclass
        chain, as a virtual machine would select it."""
        for owner in self._chain(cls):
            method = owner.find_method(name, argc)
            if method is not None:
                if method.is_abstract and not method.is_stub:
                    return None  # abstract declaration shadows nothing below
                return method
        return None

    def _virtual_targets(self, receiver: ClassSignature, name: str,
                         argc: int, inst: set | None) -> list[ArkMethod]:
        out: dict[str, ArkMethod] = {}
        for sig in self.hierarchy.cone(receiver):
            cls = self._class(sig)
            if cls is None:
                continue
            if inst is not None and sig not in inst and not cls.is_stub:
                continue
            target = self._dispatch(cls, name, argc)
            if target is not None:
                out.setdefault(target.signature.text(), target)
        return [out[key] for key in sorted(out)]

    def _free_targets(self, site: CallSite, method: ArkMethod) -> list[ArkMethod]:
        body = method.body
        name, argc = site.callee_name, site.arg_count
        # a local holding a hoisted function resolves through its defs
        if body.def_use is not None and name in body.def_use.defs:
            return self._func_local_targets(site, method)
        owner = method.signature.cls
        for depth in range(len(owner.namespace), -1, -1):
            sig = ClassSignature(owner.file, owner.namespace[:depth], "%dflt")
            cls = self.scene.lookup_class(sig)
            if cls is not None:
                target = cls.find_method(name, argc)
                if target is not None:
                    return [target]
        matches = []
        for cls in self.scene.all_classes():
            if cls.name == "%dflt":
                target = cls.find_method(name, argc)
                if target is not None:
                    matches.append(target)
        return matches if len(matches) == 1 else []

    def _func_local_targets(self, site: CallSite,
                            method: ArkMethod) -> list[ArkMethod]:
        chain = method.body.def_use
        cfg = method.body.cfg
        names: set[str] = set()
        for def_id in chain.defs_reaching(site.callee_name, site.stmt_id):
            if def_id == PARAM_DEF:
                return []
            block_id, offset = cfg.stmt_index[def_id]
            stmt = cfg.block(block_id).stmts[offset]
            if isinstance(stmt, Assign) and isinstance(stmt.rhs, FuncRef):
                names.add(stmt.rhs.name)
            else:
                return []
        if len(names) != 1:
            return []
        target = self._resolve_hoisted(method, names.pop(), site.arg_count)
        return [target] if target is not None else []

    def _resolve_hoisted(self, method: ArkMethod, name: str,
                         argc: int) -> ArkMethod | None:
        owner = self.scene.lookup_class(method.signature.cls)
        if owner is not None:
            found = owner.find_method(name, argc)
            if found is not None:
                return found
        file = self.scene._files_by_path.get(method.signature.cls.file)
        matches = [m for cls in (file.all_classes() if file else [])
                   for m in cls.methods
                   if m.name == name and m.accepts(argc)]
        return matches[0] if len(matches) == 1 else None

    def _fallback_targets(self, name: str, argc: int) -> list[ArkMethod]:
        """Unknown receiver: any class declaring a matching member."""
        out: dict[str, ArkMethod] = {}
        for cls in self.scene.all_classes():
            if cls.kind == "default":
                continue
            target = cls.find_method(name, argc)
            if target is not None and (not target.is_abstract
                                       or target.is_stub):
                out.setdefault(target.signature.text(), target)
        return [out[key] for key in sorted(out)]

    def resolve_site(self, site: CallSite, method: ArkMethod,
                     inst: set | None) -> tuple[list[ArkMethod], bool]:
        """Targets for one site plus a low-confidence marker."""
        stmt: Invoke = site.stmt
        owner_sig = method.signature.cls
        name, argc = site.callee_name, site.arg_count
        if stmt.is_ctor:
            receiver = site.receiver_type
            cls = self._class(receiver.signature) \
                if isinstance(receiver, ClassType) else None
            target = self._dispatch(cls, "constructor", argc)
            return ([target] if target is not None else []), False
        if stmt.base is None:
            return self._free_targets(site, method), False
        if isinstance(stmt.base, ClassRef):
            target = self._dispatch(self._class(stmt.base.signature), name, argc)
            return ([target] if target is not None else []), False
        if isinstance(stmt.base, ThisRef):
            return self._virtual_targets(owner_sig, name, argc, inst), False
        receiver = site.receiver_type
        if isinstance(receiver, ClassType):
            return self._virtual_targets(receiver.signature, name, argc,
                                         inst), False
        surface = self.types._surface_class(receiver)
        if surface is not None:
            return self._virtual_targets(surface.signature, name, argc,
                                         inst), False
        if isinstance(receiver, FunctionType):
            return [], False
        return self._fallback_targets(name, argc), True

    # ------------------------------------------------------------- driver

    def _instantiations(self, method: ArkMethod) -> list[ClassSignature]:
        body = method.body
        if body is None or body.cfg is None:
            return []
        owner = method.signature.cls
        resolve = self.scene.resolver_for(owner.file, owner.namespace)
        out = []
        for stmt in body.cfg.stmts():
            if isinstance(stmt, New):
                sig = resolve(stmt.class_name)
                if sig is not None:
                    out.append(sig)
        return out

    def build(self, entries: list[MethodSignature]) -> CallGraph:
        cg = CallGraph(self.algorithm, entries)
        reachable: dict[str, MethodSignature] = {}
        inst: set[ClassSignature] = set()
        unresolved_ids: set[int] = set()

        def reach(sig: MethodSignature) -> None:
            reachable.setdefault(sig.text(), sig)

        for sig in entries:
            reach(sig)

        filtering = self.algorithm == RTA
        while True:
            changed = False
            order = list(reachable.values())
            index = 0
            while index < len(order):
                caller_sig = order[index]
                index += 1
                method = self.scene.lookup_method(caller_sig.text())
                if method is None:
                    continue
                for sig in self._instantiations(method):
                    if sig not in inst:
                        inst.add(sig)
                        changed = True
                for site in self._method_sites(method):
                    targets, low = self.resolve_site(
                        site, method, inst if filtering else None)
                    cg.sites[site.id] = site
                    if not targets:
                        if site.id not in unresolved_ids:
                            unresolved_ids.add(site.id)
                        continue
                    unresolved_ids.discard(site.id)
                    if low:
                        cg.low_confidence.add(site.id)
                    for target in targets:
                        edge = (site.id, caller_sig, target.signature)
                        if edge not in cg.edges:
                            cg.edges.add(edge)
                            changed = True
                        before = len(reachable)
                        reach(target.signature)
                        if len(reachable) != before:
                            changed = True
                            order.append(target.signature)
            if not changed:
                break

        cg.nodes = {sig for sig in reachable.values()}
        cg.instantiated = inst
        cg.unresolved = sorted(
            (cg.sites[sid] for sid in unresolved_ids),
            key=lambda s: (s.caller.text(), s.stmt_id, s.id))
        return cg


def build_cha(scene: Scene, entry_points=None) -> CallGraph:
    """Call graph with every hierarchy-compatible target kept."""
    entries = _resolve_entries(scene, entry_points)
    return _GraphBuilder(scene, CHA).build(entries)


def build_rta(scene: Scene, entry_points=None) -> CallGraph:
    """CHA narrowed to receivers whose classes are actually instantiated."""
    entries = _resolve_entries(scene, entry_points)
    return _GraphBuilder(scene, RTA).build(entries)


def resolve_static(site: CallSite, scene: Scene) -> MethodSignature | None:
    """Single nearest-declaration answer for one site, hierarchy-walked."""
    builder = _GraphBuilder(scene, CHA)
    method = scene.lookup_method(site.caller.text())
    if method is None:
        return None
    receiver = site.receiver_type
    stmt = getattr(site, "stmt", None)
    if stmt is not None and stmt.base is None and not stmt.is_ctor:
        targets = builder._free_targets(site, method)
        return targets[0].signature if targets else None
    cls = None
    if isinstance(receiver, ClassType):
        cls = scene.lookup_class(receiver.signature)
    elif stmt is not None and isinstance(stmt.base, ThisRef):
        cls = scene.lookup_class(method.signature.cls)
    elif stmt is not None and isinstance(stmt.base, ClassRef):
        cls = scene.lookup_class(stmt.base.signature)
    target = builder._dispatch(cls, site.callee_name, site.arg_count)
    return target.signature if target is not None else None


def call_sites_of(scene: Scene, method: ArkMethod) -> list[CallSite]:
    """Every Invoke of one method as CallSites (fresh builder numbering)."""
    return _GraphBuilder(scene, CHA)._method_sites(method)


# ------------------------------------------------------------------ output

def emit_call_graph(cg: CallGraph, format: str = "json") -> str:
    if format == "json":
        return _emit_json(cg)
    if format == "dot":
        return _emit_dot(cg)
    raise CgError(f"unknown call graph format '{format}'")


def _emit_json(cg: CallGraph) -> str:
    edges = sorted(
        ({"site": sid, "caller": caller.text(), "callee": callee.text(),
          "line": cg.sites[sid].line}
         for sid, caller, callee in cg.edges),
        key=lambda e: (e["caller"], e["site"], e["callee"]))
    data = {
        "algorithm": cg.algorithm,
        "entryPoints": [sig.text() for sig in cg.entry_points],
        "nodes": sorted(sig.text() for sig in cg.nodes),
        "edges": edges,
        "unresolved": [
            {"site": s.id, "caller": s.caller.text(),
             "callee": s.describe(), "line": s.line}
            for s in cg.unresolved],
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit_dot(cg: CallGraph) -> str:
    lines = ["digraph callgraph {", "  rankdir=LR;"]
    for text in sorted(sig.text() for sig in cg.nodes):
        lines.append(f'  "{text}";')
    edge_rows = sorted(
        (caller.text(), callee.text(), cg.sites[sid].line, sid)
        for sid, caller, callee in cg.edges)
    for caller, callee, line, _ in edge_rows:
        lines.append(f'  "{caller}" -> "{callee}" [label="line {line}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
