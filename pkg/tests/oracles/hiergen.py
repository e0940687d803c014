"""Seeded random class hierarchies with virtual calls.

Used by the property tests relating the two call-graph algorithms: programs
mix precisely typed receivers, upcasts through parameters, interfaces, and
partial instantiation, which is where the algorithms actually diverge.
"""

from __future__ import annotations

import random

_METHOD_POOL = ("ping", "pong", "act")


def generate_hierarchy(seed: int) -> str:
    rng = random.Random(seed)
    n_classes = rng.randint(3, 8)
    lines: list[str] = []

    use_iface = rng.random() < 0.4
    if use_iface:
        lines += ["interface Api {", "  act(): number;", "}", ""]

    parents: list[str | None] = []
    for i in range(n_classes):
        name = f"C{i}"
        parent = None
        if i > 0 and rng.random() < 0.7:
            parent = f"C{rng.randrange(i)}"
        parents.append(parent)
        header = f"class {name}"
        if parent:
            header += f" extends {parent}"
        implements = use_iface and parent is None and rng.random() < 0.5
        if implements:
            header += " implements Api"
        lines.append(header + " {")
        for method in _METHOD_POOL:
            wants = rng.random() < (0.9 if method == "act" and implements else 0.45)
            if i == 0 and method == "act":
                wants = True  # roots always dispatchable
            if wants:
                lines.append(f"  {method}(): number {{")
                lines.append(f"    return {rng.randint(0, 99)};")
                lines.append("  }")
        lines.append("}")
        lines.append("")

    class_names = [f"C{i}" for i in range(n_classes)]
    helper_count = rng.randint(1, 3)
    for h in range(helper_count):
        declared = rng.choice(class_names + (["Api"] if use_iface else []))
        method = rng.choice(_METHOD_POOL) if declared != "Api" else "act"
        lines.append(f"function use{h}(x: {declared}): number {{")
        lines.append(f"  return x.{method}();")
        lines.append("}")
        lines.append("")

    instantiated = [c for c in class_names if rng.random() < 0.6]
    if not instantiated:
        instantiated = [rng.choice(class_names)]
    lines.append("function main() {")
    locals_here = []
    for idx, cls in enumerate(instantiated):
        lines.append(f"  let o{idx} = new {cls}();")
        locals_here.append(f"o{idx}")
    for k in range(rng.randint(1, 4)):
        var = rng.choice(locals_here)
        if rng.random() < 0.5:
            lines.append(f"  let t{k} = use{rng.randrange(helper_count)}({var});")
        else:
            lines.append(f"  {var}.{rng.choice(_METHOD_POOL)}();")
    lines.append("}")
    return "\n".join(lines) + "\n"
