"""Three-address IR: lowering, desugaring, CFG construction, text form."""

from .model import (  # noqa: F401
    ArkBody,
    ArrayRef,
    Assign,
    BasicBlock,
    BinaryExpr,
    Cfg,
    ClassRef,
    Constant,
    FieldRef,
    FuncRef,
    Goto,
    If,
    Invoke,
    Label,
    Local,
    New,
    Nop,
    Return,
    ThisRef,
    UnaryExpr,
)
from .lowering import Lowerer, LoweringContext, lower_method  # noqa: F401
from .desugar import DesugarHooks, desugar  # noqa: F401
from .cfgbuild import build_cfg, linearize  # noqa: F401
from .printer import dump_ir, dump_method  # noqa: F401
