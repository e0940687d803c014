"""Command-line driver.

Commands: build, ir <sig>, lint, cg, scan, nullptr. All machine-readable
output goes to stdout (or --out) and is byte-deterministic for a fixed
input tree; diagnostics and --stats timing lines go to stderr so they never
perturb comparable output. Exit codes: 0 success, 1 findings (only with
--fail-on-findings, or when a run surfaces error-severity diagnostics),
2 usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .callgraph import build_cha, build_rta, emit_call_graph
from .diagnostics import ArkLightError, ERROR, render_all
from .ifds import findings_to_json, null_pointer_analysis
from .ir.printer import dump_body
from .augment import check_constraints
from .project import parse_project
from .scan import reports_to_json, reports_to_text, run_scan
from .scene import SceneConfig, build_scene

_COMMANDS = ("build", "ir", "lint", "cg", "scan", "nullptr")


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("root", nargs="?", default=None,
                    help="project root (default: --config root or '.')")
    sp.add_argument("--config", help="scene config JSON")
    sp.add_argument("--out", help="write output to a file instead of stdout")
    sp.add_argument("--format", choices=("dot", "json", "text"), default=None)
    sp.add_argument("--stats", action="store_true",
                    help="print phase timings to stderr")
    sp.add_argument("--fail-on-findings", action="store_true")
    sp.add_argument("--algo", choices=("cha", "rta"), default="cha")
    sp.add_argument("--entry", action="append", metavar="SIG",
                    help="entry point signature (repeatable)")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arklight",
        description="Static analysis for an ArkTS-like language.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        if name == "ir":
            sp.add_argument("signature", help="method signature to dump")
        if name == "scan":
            sp.add_argument("--target", action="append", metavar="SIG",
                            help="method to find callers of (repeatable)")
        _add_common(sp)
    return parser


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled

    def measure(self, phase: str, fn):
        start = time.perf_counter()
        out = fn()
        if self.enabled:
            print(f"stats: {phase} {time.perf_counter() - start:.3f}s",
                  file=sys.stderr)
        return out


def _load_scene(args, timer: _Timer):
    config = SceneConfig.from_file(args.config) if args.config else None
    if args.root is not None:
        if config is None:
            config = SceneConfig(root=args.root)
        else:
            config.root = args.root
    root = config.root if config is not None else "."
    include = tuple(config.include) if config is not None else ("**/*.ets", "**/*.ts")

    def go():
        project = parse_project(root, include)
        return build_scene(project, config)

    return timer.measure("scene", go)


def _entries(args, config_entries) -> list | None:
    if args.entry:
        return list(args.entry)
    if config_entries:
        return list(config_entries)
    return None


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _diag_json(diags) -> list:
    return [
        {
            "path": d.path,
            "line": d.span.start_line,
            "col": d.span.start_col,
            "severity": d.severity,
            "code": d.code,
            "message": d.message,
        }
        for d in sorted(diags)
    ]


def _exit_code(args, finding_count: int, error_count: int = 0) -> int:
    if error_count:
        return 1
    if args.fail_on_findings and finding_count:
        return 1
    return 0


def _cmd_build(args, timer) -> int:
    scene = _load_scene(args, timer)
    diags = sorted(scene.diagnostics)
    if (args.format or "text") == "json":
        summary = {
            "files": len(scene.files),
            "classes": len(scene.user_classes()),
            "methods": sum(len(c.methods) for c in scene.user_classes()),
            "diagnostics": _diag_json(diags),
        }
        _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n", args)
    else:
        lines = [
            f"scene: {len(scene.files)} files, "
            f"{len(scene.user_classes())} classes, "
            f"{sum(len(c.methods) for c in scene.user_classes())} methods"
        ]
        if diags:
            lines.append(render_all(diags))
        _emit("\n".join(lines) + "\n", args)
    errors = sum(1 for d in diags if d.severity == ERROR)
    return _exit_code(args, len(diags), errors)


def _cmd_ir(args, timer) -> int:
    scene = _load_scene(args, timer)
    matches = scene.find_methods(args.signature)
    if not matches:
        print(f"error: no method matches '{args.signature}'", file=sys.stderr)
        return 2
    if len(matches) > 1:
        names = ", ".join(sorted(m.signature.text() for m in matches))
        print(f"error: '{args.signature}' is ambiguous ({names})",
              file=sys.stderr)
        return 2
    method = matches[0]
    if method.body is None:
        print(f"error: {method.signature.text()} has no body (stub)",
              file=sys.stderr)
        return 2
    _emit(timer.measure("ir", lambda: dump_body(method.body)), args)
    return 0


def _cmd_lint(args, timer) -> int:
    scene = _load_scene(args, timer)
    diags = timer.measure("lint", lambda: check_constraints(scene))
    if (args.format or "text") == "json":
        _emit(json.dumps({"analysis": "lint",
                          "diagnostics": _diag_json(diags)},
                         indent=2, sort_keys=True) + "\n", args)
    else:
        _emit(render_all(diags) + "\n" if diags else "", args)
    errors = sum(1 for d in diags if d.severity == ERROR)
    return _exit_code(args, len(diags), errors)


def _cmd_cg(args, timer) -> int:
    scene = _load_scene(args, timer)
    entries = _entries(args, scene.config.entry_points)
    build = build_cha if args.algo == "cha" else build_rta
    cg = timer.measure(args.algo, lambda: build(scene, entries))
    _emit(emit_call_graph(cg, args.format or "dot"), args)
    return 0


def _cmd_scan(args, timer) -> int:
    if not args.target:
        print("error: scan requires at least one --target", file=sys.stderr)
        return 2
    scene = _load_scene(args, timer)
    entries = _entries(args, scene.config.entry_points)
    reports = timer.measure(
        "scan", lambda: run_scan(scene, entries, args.target, algo=args.algo)
    )
    for r in reports:
        if r.warning:
            print(f"warning: {r.warning}", file=sys.stderr)
    if (args.format or "json") == "text":
        _emit(reports_to_text(reports), args)
    else:
        _emit(reports_to_json(reports, args.algo), args)
    hits = sum(len(r.callers) for r in reports)
    return _exit_code(args, hits)


def _cmd_nullptr(args, timer) -> int:
    scene = _load_scene(args, timer)
    entries = _entries(args, scene.config.entry_points)
    build = build_cha if args.algo == "cha" else build_rta
    cg = timer.measure(args.algo, lambda: build(scene, entries))
    findings = timer.measure(
        "nullptr", lambda: null_pointer_analysis(scene, cg)
    )
    if (args.format or "json") == "text":
        lines = []
        for f in findings:
            lines.append(f"{f.method.text()}:{f.span.start_line}:"
                         f"{f.span.start_col}: may-undefined {f.path}")
            for method, line in f.trace:
                lines.append(f"  via {method} line {line}")
        _emit("\n".join(lines) + "\n" if lines else "", args)
    else:
        _emit(findings_to_json(findings), args)
    return _exit_code(args, len(findings))


_HANDLERS = {
    "build": _cmd_build,
    "ir": _cmd_ir,
    "lint": _cmd_lint,
    "cg": _cmd_cg,
    "scan": _cmd_scan,
    "nullptr": _cmd_nullptr,
}


def main(argv=None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.format == "dot" and args.command != "cg":
        print("error: --format dot is only valid for cg", file=sys.stderr)
        return 2
    timer = _Timer(args.stats)
    try:
        return _HANDLERS[args.command](args, timer)
    except (ArkLightError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
