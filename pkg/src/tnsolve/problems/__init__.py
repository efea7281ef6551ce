"""Problem families and the builders that turn them into tensor networks."""

from __future__ import annotations

import numpy as np

from ..network import TensorNetwork, VariableLayout
from .layers import CircuitBuilder, build_counting_layer, build_repetition_layer, var_label
from .logic import (
    build_addition,
    build_coloring,
    build_linear_system,
    build_multiplication,
    build_partition,
    build_single_one,
)
from .routes import build_path_cost, build_route, build_tsp
from .selection import (
    build_assignment,
    build_dominating_set,
    build_integer_program,
    build_knapsack,
    build_mis,
    build_vertex_cover,
    objective_terms,
)
from .specs import *  # noqa: F401,F403
from .specs import FAMILIES, ProblemSpec, SpecError, spec_from_dict, spec_to_dict
from .unconstrained import build_hobo, build_nested, build_quadratic, build_sum_function, spec_terms

BUILDERS = {
    "qubo": build_quadratic,
    "qudo": build_quadratic,
    "tqudo": build_quadratic,
    "hobo": build_hobo,
    "sum_function": build_sum_function,
    "nested": build_nested,
    "addition_inv": build_addition,
    "multiplication_inv": build_multiplication,
    "linear_system": build_linear_system,
    "single_one": build_single_one,
    "partition": build_partition,
    "coloring": build_coloring,
    "shortest_path_cost": build_path_cost,
    "shortest_path_route": build_route,
    "tsp": build_tsp,
    "mis": build_mis,
    "vertex_cover": build_vertex_cover,
    "dominating_set": build_dominating_set,
    "knapsack": build_knapsack,
    "assignment": build_assignment,
    "ilp": build_integer_program,
    "iqp": build_integer_program,
    "ipp": build_integer_program,
}

# families whose builder reacts to the partial assignment / layer limit
ADAPTIVE = {"tsp"}


def build(spec: ProblemSpec, tau: float = 1.0, fixed=None, layer_limit=None) -> tuple[TensorNetwork, VariableLayout]:
    """Network and variable layout for ``spec`` at imaginary time ``tau``."""
    fn = BUILDERS[spec.family]
    if spec.family in ADAPTIVE:
        return fn(spec, tau, fixed=fixed, layer_limit=layer_limit)
    return fn(spec, tau)


def _max_abs(values) -> float:
    arr = np.abs(np.asarray([v for v in values if v is not None], dtype=float))
    return float(arr.max()) if arr.size else 0.0


def cost_values(spec: ProblemSpec) -> list:
    """The numbers the cost of ``spec`` is assembled from."""
    fam = spec.family
    if fam in ("qubo", "qudo", "tqudo", "hobo"):
        vals = [v for t in spec_terms(spec).values() for v in np.ravel(t).tolist()]
    elif fam in ("ilp", "iqp", "ipp"):
        vals = [v for t in objective_terms(spec).values() for v in np.ravel(t).tolist()]
    elif fam == "sum_function":
        vals = list(spec.f)
    elif fam == "nested":
        vals = [v for row in spec.tables[-1] for v in row]
    elif fam == "coloring":
        vals = [v for row in (spec.vertex_costs or ()) for v in row]
        if spec.minimize_colors:
            vals.append(spec.k - 1)
    elif fam in ("shortest_path_route", "shortest_path_cost"):
        mats = spec.edges if spec.time_dependent else (spec.edges,)
        vals = [v for m in mats for row in m for v in row]
    elif fam == "tsp":
        vals = [v for row in spec.E for v in row]
    elif fam in ("mis", "vertex_cover"):
        vals = [1.0]
    elif fam == "dominating_set":
        vals = [spec.cost_of(v) for v in range(spec.vertices)]
    elif fam == "knapsack":
        vals = [spec.value(i, x) for i, c in enumerate(spec.caps) for x in range(c + 1)]
    elif fam == "assignment":
        vals = [v for row in spec.C for v in row] + [spec.penalty]
    else:
        vals = []
    return [v for v in vals if v is not None]


def cost_scale(spec: ProblemSpec) -> float:
    """Largest magnitude among the cost terms of ``spec`` (1 when there are none)."""
    m = _max_abs(cost_values(spec))
    return m if m > 0 else 1.0


def integral_costs(spec: ProblemSpec) -> bool:
    """True when every cost is an integer, so distinct costs differ by at least 1."""
    return all(float(v).is_integer() for v in cost_values(spec))


__all__ = [
    "BUILDERS",
    "CircuitBuilder",
    "FAMILIES",
    "ProblemSpec",
    "SpecError",
    "build",
    "build_counting_layer",
    "build_repetition_layer",
    "cost_scale",
    "cost_values",
    "integral_costs",
    "spec_from_dict",
    "spec_to_dict",
    "var_label",
]
