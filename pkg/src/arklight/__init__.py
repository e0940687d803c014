"""arklight: static analysis for an ArkTS-like language.

Pipeline: parse a project, build a Scene (whole-project model with lowered
three-address bodies and view trees), then run analyses on top — def-use,
type inference, constraint lints, CHA/RTA call graphs, and IFDS dataflow
with a null-pointer client. The CLI in `arklight.cli` drives the same API.

Every public operation is exported here under both its snake_case name and
a camelCase alias matching the documented external interface.
"""

from .lexer import lex
from .parser import parse
from .project import ParsedFile, ParsedProject, parse_project, parse_source
from .scene import Scene, SceneConfig, build_scene, get_class_hierarchy
from .scenemodel import (
    ArkClass,
    ArkField,
    ArkFile,
    ArkMethod,
    ArkNamespace,
    ClassSignature,
    Decorator,
    Hierarchy,
    MethodSignature,
    ViewNode,
    ViewTree,
)
from .viewtree import build_view_tree
from .ir import ArkBody, Cfg, build_cfg, desugar, dump_ir
from .ir.lowering import lower_method
from .ir.printer import dump_body
from .augment import (
    DefUseChain,
    TypeInference,
    build_def_use,
    check_constraints,
    infer_types,
)
from .callgraph import (
    CallGraph,
    CallSite,
    build_cha,
    build_rta,
    emit_call_graph,
    resolve_static,
)
from .ifds import (
    Finding,
    FlowFunctions,
    IfdsResult,
    Supergraph,
    ZERO,
    build_supergraph,
    null_pointer_analysis,
    solve,
)
from .scan import ScanReport, run_scan
from .cli import main
from .diagnostics import ArkLightError, Diagnostic, Span

__version__ = "0.1.0"

# camelCase aliases for the documented operation names
parseProject = parse_project
buildScene = build_scene
buildViewTree = build_view_tree
getClassHierarchy = get_class_hierarchy
lowerToThreeAddress = lower_method
buildCfg = build_cfg
dumpIr = dump_body
buildDefUse = build_def_use
inferTypes = infer_types
checkConstraints = check_constraints
resolveStatic = resolve_static
buildCha = build_cha
buildRta = build_rta
emitCallGraph = emit_call_graph
buildSupergraph = build_supergraph
nullPointerAnalysis = null_pointer_analysis
runScan = run_scan

__all__ = [
    "ArkBody", "ArkClass", "ArkField", "ArkFile", "ArkLightError",
    "ArkMethod", "ArkNamespace", "CallGraph", "CallSite", "Cfg",
    "ClassSignature", "Decorator", "DefUseChain", "Diagnostic", "Finding",
    "FlowFunctions", "Hierarchy", "IfdsResult", "MethodSignature",
    "ParsedFile", "ParsedProject", "ScanReport", "Scene", "SceneConfig",
    "Span", "Supergraph", "TypeInference", "ViewNode", "ViewTree", "ZERO",
    "build_cfg", "build_cha", "build_def_use", "build_rta", "build_scene",
    "build_supergraph", "build_view_tree", "check_constraints", "desugar",
    "dump_body", "dump_ir", "emit_call_graph", "get_class_hierarchy",
    "infer_types", "lex", "lower_method", "main", "null_pointer_analysis",
    "parse", "parse_project", "parse_source", "resolve_static", "run_scan",
    "solve",
    "buildCfg", "buildCha", "buildDefUse", "buildRta", "buildScene",
    "buildSupergraph", "buildViewTree", "checkConstraints", "dumpIr",
    "emitCallGraph", "getClassHierarchy", "inferTypes",
    "lowerToThreeAddress", "nullPointerAnalysis", "parseProject",
    "resolveStatic", "runScan",
]
