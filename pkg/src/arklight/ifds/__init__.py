"""Interprocedural dataflow: supergraph, tabulation solver, clients."""

from .supergraph import CallInfo, Supergraph, build_supergraph  # noqa: F401
from .solver import FlowFunctions, IfdsResult, ZERO, solve  # noqa: F401
from .nullptr import (  # noqa: F401
    Finding,
    NullFact,
    NullFlow,
    findings_to_json,
    null_pointer_analysis,
    null_seeds,
)
