"""Subset and allocation families: independent set, vertex cover, dominating
set, knapsack (three variants), task assignment and integer programs."""

from __future__ import annotations

import numpy as np

from .layers import CircuitBuilder, attach_count_layer, attach_sum_chain, var_label
from .unconstrained import attach_terms, linear_terms, poly_terms, quadratic_terms


def _variables(dims):
    return [(var_label(i), d) for i, d in enumerate(dims)]


def _edges(spec):
    return sorted((min(e), max(e)) for e in spec.edges)


def build_mis(spec, tau: float = 1.0):
    """Edge filter forbids both ends; each chosen vertex earns ``exp(tau)``."""
    b = CircuitBuilder(_variables(spec.dims()), tau)
    both_out = np.array([[1.0, 1.0], [1.0, 0.0]])
    for u, v in _edges(spec):
        b.port(var_label(v), [(b.copy(var_label(u)), 2)], both_out)
    for v in range(spec.vertices):
        b.weight(var_label(v), b.evolve([0.0, -1.0]))
    return b.build()


def build_vertex_cover(spec, tau: float = 1.0):
    """Edge filter needs at least one end; each chosen vertex costs ``exp(-tau)``."""
    b = CircuitBuilder(_variables(spec.dims()), tau)
    covered = np.array([[0.0, 1.0], [1.0, 1.0]])
    for u, v in _edges(spec):
        b.port(var_label(v), [(b.copy(var_label(u)), 2)], covered)
    for v in range(spec.vertices):
        b.weight(var_label(v), b.evolve([0.0, 1.0]))
    return b.build()


def build_dominating_set(spec, tau: float = 1.0):
    """Per vertex, a saturating OR chain over itself and its neighbours
    requires at least one of them chosen."""
    n = spec.vertices
    b = CircuitBuilder(_variables(spec.dims()), tau)
    nbrs = {v: {v} for v in range(n)}
    for u, v in spec.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    for v in range(n):
        members = sorted(nbrs[v])
        attach_sum_chain(b, [var_label(m) for m in members], [[0, 1]] * len(members),
                         lambda z: (z >= 1).astype(float), cap=1, saturate=True)
    for v in range(n):
        b.weight(var_label(v), b.evolve([0.0, spec.cost_of(v)]))
    return b.build()


def knapsack_cap(spec) -> int | None:
    """Largest total weight worth tracking, or None when the load is not
    monotone in the weight (polynomial with a negative coefficient)."""
    if spec.variant != "polynomial":
        return spec.capacity
    if any(a < 0 for a in spec.poly):
        return None
    top = sum(max(spec.weight(i, x) for x in range(c + 1)) for i, c in enumerate(spec.caps))
    best = -1
    for w in range(top + 1):
        if spec.load(w) <= spec.capacity:
            best = w
        else:
            break
    return best


def build_knapsack(spec, tau: float = 1.0):
    dims = spec.dims()
    n = len(dims)
    b = CircuitBuilder(_variables(dims), tau)
    labels = [var_label(i) for i in range(n)]
    contrib = [[spec.weight(i, x) for x in range(dims[i])] for i in range(n)]
    cap = knapsack_cap(spec)
    if cap is not None and cap < 0:
        b.weight(labels[0], np.zeros(dims[0]))
    else:
        loads = np.vectorize(lambda w: spec.load(int(w)) <= spec.capacity)
        attach_sum_chain(b, labels, contrib, lambda z: loads(z).astype(float), cap=cap)
    for i in range(n):
        b.weight(labels[i], b.evolve([-spec.value(i, x) for x in range(dims[i])]))
    return b.build()


def build_assignment(spec, tau: float = 1.0):
    """Agent i doing task x pays C[i][x] and earns the bonus ``lam`` for any
    real task; one counting layer per real task allows it at most once."""
    dims = spec.dims()
    n, T = len(dims), dims[0]
    b = CircuitBuilder(_variables(dims), tau)
    labels = [var_label(i) for i in range(n)]
    lam = spec.penalty
    real = np.array([0.0] + [1.0] * (T - 1))
    for i in range(n):
        b.weight(labels[i], b.evolve(np.asarray(spec.C[i], dtype=float) - lam * real))
    for task in range(1, T):
        attach_count_layer(b, labels, task, 1, exact=False)
    return b.build()


def attach_inequalities(b: CircuitBuilder, A, rhs, dims) -> None:
    """Rows ``sum_j A[i][j] x_j <= rhs[i]`` as capped running sums."""
    for row, bi in zip(A, rhs):
        cols = [j for j, a in enumerate(row) if a != 0]
        if not cols:
            continue
        contrib = [[row[j] * x for x in range(dims[j])] for j in cols]
        attach_sum_chain(b, [var_label(j) for j in cols], contrib,
                         lambda z, bi=bi: (z <= bi).astype(float), cap=bi)


def objective_terms(spec) -> dict:
    dims = spec.dims()
    if spec.family == "ilp":
        return linear_terms({}, [-c for c in spec.c], dims)
    if spec.family == "iqp":
        return linear_terms(quadratic_terms(spec.Q, dims, full=True), spec.c, dims)
    if spec.family == "ipp":
        return poly_terms(spec.terms, dims)
    raise TypeError(f"not an integer program: {spec.family}")


def build_integer_program(spec, tau: float = 1.0):
    dims = spec.dims()
    b = CircuitBuilder(_variables(dims), tau)
    attach_inequalities(b, spec.A, spec.b, dims)
    attach_terms(b, objective_terms(spec), [var_label(i) for i in range(len(dims))])
    return b.build()
