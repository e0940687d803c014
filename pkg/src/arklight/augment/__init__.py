"""Per-method enrichment: def-use chains, type inference, constraint lints."""

from .defuse import PARAM_DEF, DefUseChain, build_def_use, stmt_def, stmt_reads  # noqa: F401
from .typeinfer import (  # noqa: F401
    ANY,
    ArrayType,
    BOOLEAN,
    ClassType,
    FunctionType,
    NULL,
    NUMBER,
    STRING,
    TypeInference,
    UNDEFINED,
    UNKNOWN,
    VOID,
    infer_types,
    join,
    type_from_annotation,
)
from .lints import check_constraints  # noqa: F401
