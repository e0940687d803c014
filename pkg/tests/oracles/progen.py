"""Seeded random program generator for the interpreter-agreement tests.

Programs are integer-flavored: numeric locals, arithmetic, comparisons,
bounded loops, and calls into a DAG of helper functions (no recursion, so
both evaluators terminate). Every variable name is unique to keep scoping
questions out of the comparison.
"""

from __future__ import annotations

import random

_ARITH = ("+", "-", "*", "+", "-")   # multiplication kept rarer
_CMP = ("<", "<=", ">", ">=", "==", "!=")


class _Gen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.counter = 0
        self.protected: set[str] = set()   # loop counters, never reassigned

    def writable(self, scope: list[str]) -> list[str]:
        return [v for v in scope if v not in self.protected]

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    # --------------------------------------------------------- expressions

    def expr(self, scope: list[str], depth: int = 0) -> str:
        roll = self.rng.random()
        if depth >= 3 or roll < 0.35 or not scope:
            if scope and roll < 0.55:
                return self.rng.choice(scope)
            return str(self.rng.randint(0, 9))
        if roll < 0.9:
            op = self.rng.choice(_ARITH)
            return f"({self.expr(scope, depth + 1)} {op} {self.expr(scope, depth + 1)})"
        return f"(-{self.expr(scope, depth + 1)})"

    def cond(self, scope: list[str]) -> str:
        op = self.rng.choice(_CMP)
        return f"{self.expr(scope, 2)} {op} {self.expr(scope, 2)}"

    # ---------------------------------------------------------- statements

    def stmts(self, scope: list[str], funcs, depth: int, budget: int) -> list[str]:
        out: list[str] = []
        for _ in range(budget):
            out.extend(self.one_stmt(scope, funcs, depth))
        return out

    def one_stmt(self, scope: list[str], funcs, depth: int) -> list[str]:
        kinds = ["assign", "assign", "decl", "compound", "incdec"]
        if depth < 2:
            kinds += ["if", "if", "while", "for"]
        if funcs:
            kinds += ["call", "call"]
        kind = self.rng.choice(kinds)
        targets = self.writable(scope)
        if kind == "decl" or (kind == "assign" and not targets):
            name = self.fresh("v")
            line = f"let {name} = {self.expr(scope)};"
            scope.append(name)
            return [line]
        if kind == "assign":
            return [f"{self.rng.choice(targets)} = {self.expr(scope)};"]
        if kind == "compound":
            if not targets:
                return []
            op = self.rng.choice(("+=", "-=", "*="))
            return [f"{self.rng.choice(targets)} {op} {self.expr(scope, 2)};"]
        if kind == "incdec":
            if not targets:
                return []
            var = self.rng.choice(targets)
            return [f"{var}++;" if self.rng.random() < 0.5 else f"{var}--;"]
        if kind == "call":
            name, params = self.rng.choice(funcs)
            args = ", ".join(self.expr(scope, 2) for _ in params)
            target = self.fresh("r")
            scope.append(target)
            return [f"let {target} = {name}({args});"]
        if kind == "if":
            then_body = self.stmts(list(scope), funcs, depth + 1,
                                   self.rng.randint(1, 2))
            lines = [f"if ({self.cond(scope)}) {{"]
            lines += ["  " + l for l in then_body]
            if self.rng.random() < 0.6:
                else_body = self.stmts(list(scope), funcs, depth + 1,
                                       self.rng.randint(1, 2))
                lines += ["} else {"]
                lines += ["  " + l for l in else_body]
            lines.append("}")
            return lines
        if kind == "while":
            counter = self.fresh("c")
            scope.append(counter)
            self.protected.add(counter)
            bound = self.rng.randint(0, 4)
            body = self.stmts(list(scope), funcs, depth + 1,
                              self.rng.randint(1, 2))
            lines = [f"let {counter} = 0;",
                     f"while ({counter} < {bound}) {{"]
            lines += ["  " + l for l in body]
            lines += [f"  {counter} = {counter} + 1;", "}"]
            return lines
        if kind == "for":
            i = self.fresh("i")
            self.protected.add(i)
            bound = self.rng.randint(0, 4)
            body = self.stmts(list(scope) + [i], funcs, depth + 1,
                              self.rng.randint(1, 2))
            lines = [f"for (let {i} = 0; {i} < {bound}; {i}++) {{"]
            lines += ["  " + l for l in body]
            lines.append("}")
            return lines
        return []

    # ----------------------------------------------------------- functions

    def function(self, index: int, funcs) -> tuple[str, list[str], list[str]]:
        name = f"fn{index}"
        params = [self.fresh("p") for _ in range(self.rng.randint(1, 2))]
        scope = list(params)
        body = self.stmts(scope, funcs, 1, self.rng.randint(1, 3))
        if self.rng.random() < 0.4:
            body.insert(self.rng.randrange(len(body) + 1),
                        f"if ({self.cond(scope)}) {{ return {self.expr(scope, 2)}; }}")
        body.append(f"return {self.expr(scope)};")
        return name, params, body

    def program(self) -> str:
        lines: list[str] = []
        funcs: list[tuple[str, list[str]]] = []
        for i in range(self.rng.randint(0, 3)):
            name, params, body = self.function(i, list(funcs))
            header = ", ".join(f"{p}: number" for p in params)
            lines.append(f"function {name}({header}): number {{")
            lines += ["  " + l for l in body]
            lines += ["}", ""]
            funcs.append((name, params))
        scope: list[str] = []
        main_body = []
        for _ in range(self.rng.randint(2, 4)):
            name = self.fresh("v")
            main_body.append(f"let {name} = {self.rng.randint(0, 9)};")
            scope.append(name)
        main_body += self.stmts(scope, funcs, 0, self.rng.randint(3, 7))
        lines.append("function main() {")
        lines += ["  " + l for l in main_body]
        lines.append("}")
        return "\n".join(lines) + "\n"


def generate_program(seed: int) -> str:
    return _Gen(random.Random(seed)).program()
