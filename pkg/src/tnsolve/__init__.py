"""Exact combinatorial solving by contracting logic-circuit tensor networks."""

from .network import (
    ContractionPlan,
    InfeasibleSignal,
    TensorNetwork,
    VariableLayout,
    attach_boundaries,
    attach_boundary,
    contract,
    contract_value,
    half_partial_trace,
    plan_contraction,
)
from .oracle import OracleResult, enumerate_spec, knapsack_dp, verify
from .problems import build, spec_from_dict, spec_to_dict
from .solver import Solution, SolverConfig, count_solutions, determine_variable, solve
from .tensor import SparseTensor, contract_pair

__version__ = "0.1.0"
