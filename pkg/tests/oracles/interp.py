"""Reference interpreters used as executable oracles.

Two independent evaluators share one value runtime: ``AstInterpreter`` walks
parsed syntax trees directly, ``IrInterpreter`` executes scene-lowered CFGs.
Agreement between the two on generated programs exercises the whole lowering
pipeline end to end. The CFG evaluator additionally records every call it
actually performs, which gives the call-graph tests a dynamic baseline.

Runtime mapping: numbers are floats, ``undefined`` is ``None``, ``null`` is
the JS_NULL sentinel, objects and arrays are small wrapper classes.
"""

from __future__ import annotations

import math

from arklight import astnodes as A
from arklight.ir import model as ir


class InterpError(Exception):
    pass


class StepBudgetExceeded(InterpError):
    pass


STEP_BUDGET = 400_000


class _Null:
    __slots__ = ()

    def __repr__(self):
        return "null"


JS_NULL = _Null()


class JsObject:
    def __init__(self, class_name, ark_class=None):
        self.class_name = class_name
        self.ark_class = ark_class
        self.fields = {}

    def __repr__(self):
        return f"<{self.class_name}>"


class JsArray:
    def __init__(self, items=None):
        self.items = list(items or [])

    def __repr__(self):
        return f"JsArray({self.items})"


class FuncValue:
    """A first-class function value: an AST closure or an IR func-ref."""

    def __init__(self, kind, payload, env=None, this=None):
        self.kind = kind          # 'closure' | 'ref'
        self.payload = payload    # (params, body, expr_body) | name
        self.env = env
        self.this = this


class ClassValue:
    def __init__(self, payload):
        self.payload = payload    # AstNode ClassDecl or ArkClass


class NsValue:
    def __init__(self, scope):
        self.scope = scope


# ------------------------------------------------------------------ runtime


def truthy(v):
    if v is None or v is JS_NULL or v is False:
        return False
    if isinstance(v, float):
        return v != 0 and not math.isnan(v)
    if isinstance(v, str):
        return v != ""
    if v is True:
        return True
    return True


def to_num(v):
    if v is None:
        return math.nan
    if v is JS_NULL:
        return 0.0
    if isinstance(v, bool):
        return 1.0 if v else 0.0
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        s = v.strip()
        if s == "":
            return 0.0
        try:
            return float(s)
        except ValueError:
            return math.nan
    return math.nan


def num_text(f):
    if math.isnan(f):
        return "NaN"
    if math.isinf(f):
        return "Infinity" if f > 0 else "-Infinity"
    if f == int(f) and abs(f) < 1e21:
        return str(int(f))
    return repr(f)


def to_text(v):
    if v is None:
        return "undefined"
    if v is JS_NULL:
        return "null"
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, float):
        return num_text(v)
    if isinstance(v, str):
        return v
    if isinstance(v, JsArray):
        return ",".join(to_text(x) for x in v.items)
    return "[object Object]"


def loose_eq(a, b):
    a_nullish = a is None or a is JS_NULL
    b_nullish = b is None or b is JS_NULL
    if a_nullish or b_nullish:
        return a_nullish and b_nullish
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, (float, bool)) or isinstance(b, (float, bool)):
        x, y = to_num(a), to_num(b)
        if math.isnan(x) or math.isnan(y):
            return False
        return x == y
    return a is b


def strict_eq(a, b):
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    if isinstance(a, float) and isinstance(b, float):
        return not (math.isnan(a) or math.isnan(b)) and a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, bool) and isinstance(b, bool):
        return a == b
    return a is b


def js_add(a, b):
    if isinstance(a, str) or isinstance(b, str) \
            or isinstance(a, (JsArray, JsObject)) or isinstance(b, (JsArray, JsObject)):
        return to_text(a) + to_text(b)
    return to_num(a) + to_num(b)


def js_div(a, b):
    if b == 0:
        if a == 0 or math.isnan(a):
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)
    return a / b


def binop(op, a, b):
    if op == "+":
        return js_add(a, b)
    if op == "-":
        return to_num(a) - to_num(b)
    if op == "*":
        return to_num(a) * to_num(b)
    if op == "/":
        return js_div(to_num(a), to_num(b))
    if op == "%":
        x, y = to_num(a), to_num(b)
        if y == 0 or math.isnan(x) or math.isnan(y) or math.isinf(x):
            return math.nan
        return math.fmod(x, y)
    if op == "==":
        return loose_eq(a, b)
    if op == "!=":
        return not loose_eq(a, b)
    if op == "===":
        return strict_eq(a, b)
    if op == "!==":
        return not strict_eq(a, b)
    if op in ("<", "<=", ">", ">="):
        if isinstance(a, str) and isinstance(b, str):
            x, y = a, b
        else:
            x, y = to_num(a), to_num(b)
            if math.isnan(x) or math.isnan(y):
                return False
        if op == "<":
            return x < y
        if op == "<=":
            return x <= y
        if op == ">":
            return x > y
        return x >= y
    if op == "&&":
        return b if truthy(a) else a
    if op == "||":
        return a if truthy(a) else b
    raise InterpError(f"unsupported binary operator {op!r}")


def unop(op, v):
    if op == "-":
        return -to_num(v)
    if op == "+":
        return to_num(v)
    if op == "!":
        return not truthy(v)
    raise InterpError(f"unsupported unary operator {op!r}")


def literal_value(node):
    lit = node.attr("lit")
    if lit == "number":
        return float(node.attr("value"))
    if lit == "string":
        return node.attr("value")
    if lit == "boolean":
        return bool(node.attr("value"))
    if lit == "null":
        return JS_NULL
    return None


# ---------------------------------------------------------- AST interpreter


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class AstInterpreter:
    """Direct evaluator over parsed modules (no lowering involved)."""

    def __init__(self, modules):
        # modules: iterable of Module AstNodes; later files shadow earlier.
        self.scope = {}
        for module in modules:
            self._index(module, self.scope)
        self.steps = 0

    def _index(self, container, scope):
        for decl in container.children:
            if decl.kind == A.FUNCTION_DECL:
                scope[decl.name] = ("fn", decl)
            elif decl.kind == A.CLASS_DECL:
                scope[decl.name] = ("class", decl)
            elif decl.kind == A.NAMESPACE_DECL:
                sub = scope.get(decl.name, ("ns", {}))[1] \
                    if scope.get(decl.name, ("", None))[0] == "ns" else {}
                self._index(decl, sub)
                scope[decl.name] = ("ns", sub)

    def run_function(self, name, args=()):
        entry = self.scope.get(name)
        if entry is None or entry[0] != "fn":
            raise InterpError(f"no function named {name!r}")
        return self.call_ast_function(entry[1], list(args))

    def call_ast_function(self, decl, args, this=None):
        frame = _Frame(this)
        self._bind_params(decl.attrs.get("params", []), args, frame)
        body = decl.attrs.get("body")
        try:
            if body is not None:
                self.exec_block(body, frame)
        except _Return as ret:
            return ret.value, frame.vars
        return None, frame.vars

    def _bind_params(self, params, args, frame):
        for i, param in enumerate(params):
            if param.attr("rest"):
                frame.vars[param.name] = JsArray(args[i:])
                return
            if i < len(args):
                frame.vars[param.name] = args[i]
            elif param.attr("default") is not None:
                frame.vars[param.name] = self.eval(param.attr("default"), frame)
            else:
                frame.vars[param.name] = None

    def tick(self):
        self.steps += 1
        if self.steps > STEP_BUDGET:
            raise StepBudgetExceeded("AST interpreter step budget exceeded")

    def exec_block(self, block, frame):
        for stmt in block.children:
            self.exec_stmt(stmt, frame)

    def exec_stmt(self, stmt, frame):
        self.tick()
        kind = stmt.kind
        if kind == A.VAR_DECL:
            init = stmt.attr("init")
            frame.vars[stmt.name] = self.eval(init, frame) if init is not None else None
        elif kind == A.ASSIGN:
            self._assign(stmt, frame)
        elif kind == A.EXPR_STMT:
            self.eval(stmt.child(0), frame)
        elif kind == A.IF_STMT:
            if truthy(self.eval(stmt.child(0), frame)):
                self.exec_branch(stmt.child(1), frame)
            elif len(stmt.children) > 2:
                self.exec_branch(stmt.child(2), frame)
        elif kind == A.WHILE_STMT:
            while truthy(self.eval(stmt.child(0), frame)):
                self.tick()
                self.exec_branch(stmt.child(1), frame)
        elif kind == A.FOR_STMT:
            for init in stmt.attr("init", []):
                self.exec_stmt(init, frame)
            cond = stmt.attr("cond")
            while cond is None or truthy(self.eval(cond, frame)):
                self.tick()
                self.exec_branch(stmt.child(0), frame)
                for upd in stmt.attr("update", []):
                    self.exec_stmt(upd, frame)
        elif kind == A.RETURN_STMT:
            value = self.eval(stmt.child(0), frame) if stmt.children else None
            raise _Return(value)
        elif kind == A.BLOCK:
            self.exec_block(stmt, frame)
        elif kind == A.EMPTY_STMT:
            pass
        else:
            raise InterpError(f"unsupported statement kind {kind}")

    def exec_branch(self, node, frame):
        if node.kind == A.BLOCK:
            self.exec_block(node, frame)
        else:
            self.exec_stmt(node, frame)

    def _assign(self, stmt, frame):
        lhs, rhs = stmt.child(0), stmt.child(1)
        op = stmt.attr("op", "=")
        value = self.eval(rhs, frame)
        if op != "=":
            value = binop(op[:-1], self._read_lvalue(lhs, frame), value)
        self._write_lvalue(lhs, value, frame)

    def _read_lvalue(self, lhs, frame):
        return self.eval(lhs, frame)

    def _write_lvalue(self, lhs, value, frame):
        if lhs.kind == A.IDENTIFIER:
            frame.vars[lhs.name] = value
        elif lhs.kind == A.MEMBER:
            base = self.eval(lhs.child(0), frame)
            if isinstance(base, JsObject):
                base.fields[lhs.name] = value
            elif isinstance(base, JsArray) and lhs.name == "length":
                del base.items[int(to_num(value)):]
            else:
                raise InterpError("member store on a non-object")
        elif lhs.kind == A.INDEX:
            base = self.eval(lhs.child(0), frame)
            index = int(to_num(self.eval(lhs.child(1), frame)))
            if not isinstance(base, JsArray):
                raise InterpError("index store on a non-array")
            while len(base.items) <= index:
                base.items.append(None)
            base.items[index] = value
        else:
            raise InterpError(f"invalid assignment target {lhs.kind}")

    def eval(self, node, frame):
        self.tick()
        kind = node.kind
        if kind == A.LITERAL:
            return literal_value(node)
        if kind == A.IDENTIFIER:
            name = node.name
            if name in frame.vars:
                return frame.vars[name]
            entry = self.scope.get(name)
            if entry is None:
                return None
            tag, payload = entry
            if tag == "fn":
                return FuncValue("closure",
                                 (payload.attrs.get("params", []),
                                  payload.attrs.get("body"), False),
                                 env=None, this=None)
            if tag == "class":
                return ClassValue(payload)
            return NsValue(payload)
        if kind == A.THIS_EXPR:
            return frame.this
        if kind == A.BINARY:
            op = node.attr("op")
            left = self.eval(node.child(0), frame)
            if op == "&&":
                return self.eval(node.child(1), frame) if truthy(left) else left
            if op == "||":
                return left if truthy(left) else self.eval(node.child(1), frame)
            return binop(op, left, self.eval(node.child(1), frame))
        if kind == A.UNARY:
            return unop(node.attr("op"), self.eval(node.child(0), frame))
        if kind in (A.PREFIX_UNARY, A.POSTFIX_UNARY):
            old = to_num(self._read_lvalue(node.child(0), frame))
            new = old + (1.0 if node.attr("op") == "++" else -1.0)
            self._write_lvalue(node.child(0), new, frame)
            return new if kind == A.PREFIX_UNARY else old
        if kind == A.CALL:
            return self._call(node, frame)
        if kind == A.NEW_EXPR:
            return self._new(node, frame)
        if kind == A.MEMBER:
            return self._member(node, frame)
        if kind == A.INDEX:
            base = self.eval(node.child(0), frame)
            index = int(to_num(self.eval(node.child(1), frame)))
            if isinstance(base, JsArray):
                if 0 <= index < len(base.items):
                    return base.items[index]
                return None
            if isinstance(base, str):
                return base[index] if 0 <= index < len(base) else None
            raise InterpError("index read on a non-array")
        if kind == A.ARRAY_LITERAL:
            return JsArray([self.eval(el, frame) for el in node.children])
        if kind == A.OBJECT_LITERAL:
            obj = JsObject("%object")
            for prop in node.children:
                obj.fields[prop.name] = self.eval(prop.child(0), frame)
            return obj
        if kind in (A.ARROW_FN, A.ANON_FN):
            return FuncValue("closure",
                             (node.attrs.get("params", []), node.child(0),
                              node.attr("expr_body", False)),
                             env=frame, this=frame.this)
        raise InterpError(f"unsupported expression kind {kind}")

    def _member(self, node, frame):
        base = self.eval(node.child(0), frame)
        name = node.name
        if isinstance(base, JsObject):
            return base.fields.get(name)
        if isinstance(base, JsArray):
            if name == "length":
                return float(len(base.items))
            return None
        if isinstance(base, str) and name == "length":
            return float(len(base))
        if isinstance(base, NsValue):
            entry = base.scope.get(name)
            if entry and entry[0] == "fn":
                return FuncValue("closure",
                                 (entry[1].attrs.get("params", []),
                                  entry[1].attrs.get("body"), False))
            return None
        if isinstance(base, ClassValue):
            return None
        return None

    def _call(self, node, frame):
        callee = node.child(0)
        args = [self.eval(arg, frame) for arg in node.children[1:]]
        if callee.kind == A.MEMBER:
            base_node = callee.child(0)
            if base_node.kind == A.IDENTIFIER and base_node.name not in frame.vars \
                    and base_node.name in ("console", "hilog"):
                return None
            base = self.eval(base_node, frame)
            name = callee.name
            if isinstance(base, NsValue):
                entry = base.scope.get(name)
                if entry is None or entry[0] != "fn":
                    raise InterpError(f"namespace member {name!r} is not callable")
                return self.call_ast_function(entry[1], args)[0]
            if isinstance(base, ClassValue):
                method = self._find_method(base.payload, name)
                if method is None:
                    raise InterpError(f"no static method {name!r}")
                return self._call_method(method, None, args)
            if isinstance(base, JsObject):
                method = self._find_method(self._class_of(base), name)
                if method is None:
                    raise InterpError(f"no method {name!r} on {base.class_name}")
                return self._call_method(method, base, args)
            if isinstance(base, JsArray):
                return self._array_native(base, name, args)
            raise InterpError(f"cannot call {name!r} on {type(base).__name__}")
        value = self.eval(callee, frame)
        if isinstance(value, FuncValue):
            return self._call_closure(value, args)
        raise InterpError("called a non-function value")

    def _call_closure(self, fn, args):
        params, body, expr_body = fn.payload
        frame = _Frame(fn.this, parent=fn.env)
        self._bind_params(params, args, frame)
        try:
            if expr_body:
                return self.eval(body, frame)
            if body is not None:
                self.exec_block(body, frame)
        except _Return as ret:
            return ret.value
        return None

    def _call_method(self, method_decl, this, args):
        frame = _Frame(this)
        self._bind_params(method_decl.attrs.get("params", []), args, frame)
        body = method_decl.attrs.get("body")
        try:
            if body is not None:
                self.exec_block(body, frame)
        except _Return as ret:
            return ret.value
        return None

    def _array_native(self, arr, name, args):
        if name == "push":
            arr.items.extend(args)
            return float(len(arr.items))
        if name == "pop":
            return arr.items.pop() if arr.items else None
        if name == "indexOf":
            for i, item in enumerate(arr.items):
                if strict_eq(item, args[0] if args else None):
                    return float(i)
            return -1.0
        if name == "join":
            sep = to_text(args[0]) if args else ","
            return sep.join(to_text(x) for x in arr.items)
        raise InterpError(f"unsupported array method {name!r}")

    def _class_decl(self, name):
        entry = self.scope.get(name)
        if entry and entry[0] == "class":
            return entry[1]
        return None

    def _class_of(self, obj):
        return self._class_decl(obj.class_name)

    def _class_chain(self, decl):
        chain = []
        seen = set()
        while decl is not None and decl.name not in seen:
            chain.append(decl)
            seen.add(decl.name)
            sup = decl.attr("superclass")
            decl = self._class_decl(sup) if sup else None
        return chain

    def _find_method(self, decl, name):
        for cls in self._class_chain(decl):
            for member in cls.children:
                if member.kind == A.METHOD_DECL and member.name == name \
                        and not member.attr("abstract"):
                    return member
        return None

    def _new(self, node, frame):
        decl = self._class_decl(node.attr("name"))
        args = [self.eval(arg, frame) for arg in node.children]
        if node.attr("name") == "Array":
            return JsArray()
        if decl is None:
            return JsObject(node.attr("name"))
        obj = JsObject(decl.name)
        # Field initializers run ancestor-first, mirroring construction order.
        for cls in reversed(self._class_chain(decl)):
            for member in cls.children:
                if member.kind == A.FIELD_DECL and not member.attr("static") \
                        and member.attr("init") is not None:
                    init_frame = _Frame(obj)
                    obj.fields[member.name] = self.eval(member.attr("init"),
                                                        init_frame)
        ctor = self._find_method(decl, "constructor")
        if ctor is not None:
            self._call_method(ctor, obj, args)
        return obj


class _Frame:
    def __init__(self, this, parent=None):
        self.this = this
        self.parent = parent
        self._vars = {}

    @property
    def vars(self):
        return _ChainVars(self) if self.parent is not None else self._vars


class _ChainVars:
    """Closure variable lookup: reads fall back to the captured frame,
    writes go to the defining frame when the name exists there."""

    def __init__(self, frame):
        self.frame = frame

    def __contains__(self, name):
        frame = self.frame
        while frame is not None:
            if name in frame._vars:
                return True
            frame = frame.parent
        return False

    def __getitem__(self, name):
        frame = self.frame
        while frame is not None:
            if name in frame._vars:
                return frame._vars[name]
            frame = frame.parent
        raise KeyError(name)

    def __setitem__(self, name, value):
        frame = self.frame
        while frame is not None:
            if name in frame._vars:
                frame._vars[name] = value
                return
            frame = frame.parent
        self.frame._vars[name] = value

    def get(self, name, default=None):
        return self[name] if name in self else default


# ----------------------------------------------------------- IR interpreter


class IrInterpreter:
    """Executes final (desugared) CFGs out of a built scene.

    ``edges`` collects every (caller signature text, callee signature text)
    pair that actually executed, constructor calls included.
    """

    def __init__(self, scene):
        self.scene = scene
        self.edges = set()
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > STEP_BUDGET:
            raise StepBudgetExceeded("IR interpreter step budget exceeded")

    def run_method(self, sig_text, args=()):
        methods = self.scene.find_methods(sig_text)
        if len(methods) != 1:
            raise InterpError(f"entry {sig_text!r} matched {len(methods)} methods")
        return self.exec_method(methods[0], None, list(args))

    def exec_method(self, method, this, args):
        """Returns (return value, final locals dict)."""
        body = method.body
        if body is None or body.cfg is None:
            return None, {}
        env = {}
        for i, name in enumerate(body.params):
            env[name] = args[i] if i < len(args) else None
        cfg = body.cfg
        block = cfg.block(cfg.entry)
        idx = 0
        while True:
            self.tick()
            if idx >= len(block.stmts):
                if not block.successors:
                    return None, env
                block = cfg.block(block.successors[0])
                idx = 0
                continue
            stmt = block.stmts[idx]
            if isinstance(stmt, (ir.Label, ir.Nop)):
                idx += 1
            elif isinstance(stmt, ir.Assign):
                self._store(stmt.lhs, self._eval(stmt.rhs, env, this), env, this)
                idx += 1
            elif isinstance(stmt, ir.New):
                env[stmt.result.name] = self._instantiate(stmt.class_name, method)
                idx += 1
            elif isinstance(stmt, ir.Invoke):
                result = self._invoke(method, stmt, env, this)
                if stmt.result is not None:
                    env[stmt.result.name] = result
                idx += 1
            elif isinstance(stmt, ir.If):
                branch = 0 if truthy(self._eval(stmt.cond, env, this)) else 1
                block = cfg.block(block.successors[branch])
                idx = 0
            elif isinstance(stmt, ir.Goto):
                block = cfg.block(block.successors[0])
                idx = 0
            elif isinstance(stmt, ir.Return):
                value = self._eval(stmt.value, env, this) \
                    if stmt.value is not None else None
                return value, env
            else:
                raise InterpError(f"unexpected statement {type(stmt).__name__}")

    # ------------------------------------------------------------- values

    def _eval(self, expr, env, this):
        if isinstance(expr, ir.Local):
            return env.get(expr.name)
        if isinstance(expr, ir.Constant):
            return self._constant(expr)
        if isinstance(expr, ir.ThisRef):
            return this
        if isinstance(expr, ir.ClassRef):
            return ClassValue(self.scene.lookup_class(expr.signature))
        if isinstance(expr, ir.FuncRef):
            return FuncValue("ref", expr.name)
        if isinstance(expr, ir.FieldRef):
            return self._load_field(self._eval(expr.base, env, this), expr.field)
        if isinstance(expr, ir.ArrayRef):
            base = self._eval(expr.base, env, this)
            index = int(to_num(self._eval(expr.index, env, this)))
            if isinstance(base, JsArray):
                if 0 <= index < len(base.items):
                    return base.items[index]
                return None
            if isinstance(base, str):
                return base[index] if 0 <= index < len(base) else None
            raise InterpError("index read on a non-array")
        if isinstance(expr, ir.BinaryExpr):
            return binop(expr.op, self._eval(expr.left, env, this),
                         self._eval(expr.right, env, this))
        if isinstance(expr, ir.UnaryExpr):
            return unop(expr.op, self._eval(expr.operand, env, this))
        raise InterpError(f"unsupported IR expression {type(expr).__name__}")

    def _constant(self, const):
        if const.kind == "number":
            return float(const.value)
        if const.kind == "string":
            return str(const.value)
        if const.kind == "boolean":
            return bool(const.value)
        if const.kind == "null":
            return JS_NULL
        return None

    def _load_field(self, base, name):
        if isinstance(base, JsObject):
            return base.fields.get(name)
        if isinstance(base, JsArray):
            return float(len(base.items)) if name == "length" else None
        if isinstance(base, str) and name == "length":
            return float(len(base))
        if isinstance(base, ClassValue):
            return None
        if base is None or base is JS_NULL:
            raise InterpError(f"field {name!r} read on a nullish base")
        return None

    def _store(self, lhs, value, env, this):
        if isinstance(lhs, ir.Local):
            env[lhs.name] = value
        elif isinstance(lhs, ir.FieldRef):
            base = self._eval(lhs.base, env, this)
            if isinstance(base, JsObject):
                base.fields[lhs.field] = value
            elif isinstance(base, JsArray) and lhs.field == "length":
                del base.items[int(to_num(value)):]
            else:
                raise InterpError("field store on a non-object")
        elif isinstance(lhs, ir.ArrayRef):
            base = self._eval(lhs.base, env, this)
            index = int(to_num(self._eval(lhs.index, env, this)))
            if not isinstance(base, JsArray):
                raise InterpError("index store on a non-array")
            while len(base.items) <= index:
                base.items.append(None)
            base.items[index] = value
        else:
            raise InterpError(f"invalid store target {type(lhs).__name__}")

    def _instantiate(self, class_name, method):
        if class_name == "Array":
            return JsArray()
        owner = method.signature.cls
        cls = self.scene.resolve_class(class_name, owner.file, owner.namespace)
        if cls is None:
            return JsObject(class_name)
        return JsObject(cls.signature.text(), ark_class=cls)

    # -------------------------------------------------------------- calls

    def _class_chain(self, cls):
        chain = []
        seen = set()
        while cls is not None and cls.signature not in seen:
            chain.append(cls)
            seen.add(cls.signature)
            if not cls.superclass_name:
                break
            cls = self.scene.resolve_class(cls.superclass_name,
                                           cls.signature.file,
                                           cls.signature.namespace)
        return chain

    def _dispatch(self, cls, name, argc):
        for c in self._class_chain(cls):
            m = c.find_method(name, argc)
            if m is not None and not m.is_abstract:
                return m
            if m is not None and c.is_stub:
                return m
        return None

    def _free_target(self, caller, name, argc):
        owner = caller.signature.cls
        ns = owner.namespace
        for depth in range(len(ns), -1, -1):
            sig_text = f"{owner.file}: {'.'.join(ns[:depth] + ('%dflt',))}"
            dflt = self.scene.lookup_class(sig_text)
            if dflt is not None:
                m = dflt.find_method(name, argc)
                if m is not None:
                    return m
        matches = [m for m in self.scene.method_index.values()
                   if m.signature.name == name and m.signature.cls.name == "%dflt"
                   and m.accepts(argc)]
        if len(matches) == 1:
            return matches[0]
        return None

    def _invoke(self, caller, stmt, env, this):
        args = [self._eval(a, env, this) for a in stmt.args]
        argc = len(args)
        target = None
        receiver = None
        if stmt.base is None:
            value = env.get(stmt.callee)
            if isinstance(value, FuncValue) and value.kind == "ref":
                owner = self.scene.lookup_class(caller.signature.cls)
                target = owner.find_method(value.payload) if owner else None
                if target is None:
                    target = self._free_target(caller, value.payload, argc)
            else:
                target = self._free_target(caller, stmt.callee, argc)
        else:
            base = self._eval(stmt.base, env, this)
            if isinstance(base, ClassValue):
                target = self._dispatch(base.payload, stmt.callee, argc)
            elif isinstance(base, JsObject):
                receiver = base
                name = "constructor" if stmt.is_ctor else stmt.callee
                if base.ark_class is not None:
                    target = self._dispatch(base.ark_class, name, argc)
            elif isinstance(base, JsArray):
                return self._array_native(base, stmt.callee, args)
            elif isinstance(base, str):
                return self._string_native(base, stmt.callee, args)
            elif base is None or base is JS_NULL:
                raise InterpError(f"call of {stmt.callee!r} on a nullish base")
        if target is None:
            if stmt.is_ctor:
                return None
            raise InterpError(f"cannot resolve call to {stmt.callee!r}")
        self.edges.add((caller.signature.text(), target.signature.text()))
        if target.body is None or target.body.cfg is None:
            return None
        call_this = receiver if not target.is_static else None
        return self.exec_method(target, call_this, args)[0]

    def _array_native(self, arr, name, args):
        if name == "push":
            arr.items.extend(args)
            return float(len(arr.items))
        if name == "pop":
            return arr.items.pop() if arr.items else None
        if name == "indexOf":
            for i, item in enumerate(arr.items):
                if strict_eq(item, args[0] if args else None):
                    return float(i)
            return -1.0
        if name == "join":
            sep = to_text(args[0]) if args else ","
            return sep.join(to_text(x) for x in arr.items)
        raise InterpError(f"unsupported array method {name!r}")

    def _string_native(self, s, name, args):
        if name == "charAt":
            i = int(to_num(args[0])) if args else 0
            return s[i] if 0 <= i < len(s) else ""
        if name == "indexOf":
            return float(s.find(to_text(args[0]) if args else "undefined"))
        if name == "toUpperCase":
            return s.upper()
        if name == "toLowerCase":
            return s.lower()
        raise InterpError(f"unsupported string method {name!r}")


def values_equal(a, b, depth=0):
    """Structural comparison across the two runtimes: objects compare by
    field map, arrays by element list, scalars by strict equality (with
    NaN == NaN so diverging programs still compare stable)."""
    if depth > 24:
        return True
    if isinstance(a, JsObject) and isinstance(b, JsObject):
        if set(a.fields) != set(b.fields):
            return False
        return all(values_equal(a.fields[k], b.fields[k], depth + 1)
                   for k in a.fields)
    if isinstance(a, JsArray) and isinstance(b, JsArray):
        if len(a.items) != len(b.items):
            return False
        return all(values_equal(x, y, depth + 1)
                   for x, y in zip(a.items, b.items))
    if isinstance(a, float) and isinstance(b, float) \
            and math.isnan(a) and math.isnan(b):
        return True
    if isinstance(a, FuncValue) and isinstance(b, FuncValue):
        return True
    return strict_eq(a, b)


def envs_equal(a, b, names):
    return all(values_equal(a.get(n), b.get(n)) for n in names)


def final_locals(scene, sig_text):
    """Run a zero-argument entry method and project its final frame onto the
    declared source locals (missing locals read as undefined)."""
    interp = IrInterpreter(scene)
    methods = scene.find_methods(sig_text)
    if len(methods) != 1:
        raise InterpError(f"entry {sig_text!r} matched {len(methods)} methods")
    method = methods[0]
    _, env = interp.exec_method(method, None, [])
    return {name: env.get(name) for name in method.body.source_locals}
