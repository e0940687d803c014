"""Sensitive-API scan: who calls a given method.

Builds a call graph (CHA unless told otherwise), then reports every caller
edge into each target signature. Unknown targets produce a report with a
warning attached instead of failing the run, so one bad signature does not
abort a CI sweep over many.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .callgraph import CHA, CallGraph, build_cha, build_rta
from .scenemodel import MethodSignature


@dataclass
class ScanReport:
    target_text: str
    target: MethodSignature | None = None
    callers: list[tuple[MethodSignature, int]] = field(default_factory=list)
    warning: str | None = None


def _callers_of(cg: CallGraph, target: MethodSignature) -> list:
    key = target.text()
    out: dict[tuple[str, int], tuple[MethodSignature, int]] = {}
    for site_id, caller, callee in cg.edges:
        if callee.text() != key:
            continue
        line = cg.sites[site_id].line
        out.setdefault((caller.text(), line), (caller, line))
    return [out[k] for k in sorted(out)]


def run_scan(scene, entries=None, targets=(), algo: str = CHA,
             cg: CallGraph | None = None) -> list[ScanReport]:
    """One report per target, in the order given; pass ``cg`` to reuse one."""
    if cg is None:
        build = build_cha if algo == CHA else build_rta
        cg = build(scene, entries)
    reports = []
    for text in targets:
        matches = scene.find_methods(text)
        if not matches:
            reports.append(ScanReport(
                target_text=text,
                warning=f"target '{text}' is not in the scene; empty report",
            ))
            continue
        if len(matches) > 1:
            names = ", ".join(sorted(m.signature.text() for m in matches))
            reports.append(ScanReport(
                target_text=text,
                warning=f"target '{text}' is ambiguous ({names}); empty report",
            ))
            continue
        sig = matches[0].signature
        reports.append(ScanReport(
            target_text=text,
            target=sig,
            callers=_callers_of(cg, sig),
        ))
    return reports


def reports_to_json(reports, algorithm: str) -> str:
    payload = {
        "analysis": "scan",
        "algorithm": algorithm,
        "reports": [
            {
                "target": r.target.text() if r.target else r.target_text,
                "callers": [
                    {"method": m.text(), "line": line} for m, line in r.callers
                ],
                **({"warning": r.warning} if r.warning else {}),
            }
            for r in reports
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def reports_to_text(reports) -> str:
    lines = []
    for r in reports:
        lines.append(f"target {r.target.text() if r.target else r.target_text}")
        if r.warning:
            lines.append(f"  warning: {r.warning}")
        for m, line in r.callers:
            lines.append(f"  caller {m.text()} (line {line})")
        if r.target is not None and not r.callers:
            lines.append("  no callers")
    return "\n".join(lines) + "\n" if lines else ""
