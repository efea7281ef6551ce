"""Routing families: shortest path (cost histogram or explicit route) and the
travelling salesman with repetition filter layers."""

from __future__ import annotations

import numpy as np

from .layers import CircuitBuilder, attach_count_layer, var_label


def _edge_arrays(spec, t):
    """Transition cost matrix ``cost[j, i]`` (from i to j) and its finite mask."""
    V = spec.vertices
    cost = np.zeros((V, V))
    mask = np.zeros((V, V), bool)
    for i in range(V):
        for j in range(V):
            c = spec.step_cost(t, i, j)
            if c is not None:
                cost[j, i] = c
                mask[j, i] = True
    return cost, mask


def _one_hot(dim, value):
    v = np.zeros(dim)
    v[value] = 1
    return v


def build_route(spec, tau: float = 1.0):
    """Positions x_0..x_{N-1} with fixed ends; every move is weighted by
    ``exp(-tau * E[i][j])`` and missing edges have no entry at all."""
    V, N = spec.vertices, spec.steps
    b = CircuitBuilder([(var_label(t), V) for t in range(N)], tau)
    b.weight(var_label(0), _one_hot(V, spec.source))
    b.weight(var_label(N - 1), _one_hot(V, spec.sink))
    for t in range(N - 1):
        cost, mask = _edge_arrays(spec, t)
        b.port(var_label(t + 1), [(b.copy(var_label(t)), V)], b.evolve(cost, mask))
    return b.build()


def cost_bounds(spec) -> list[int]:
    """Largest accumulated cost reachable after each transition."""
    out, acc = [], 0
    for t in range(spec.steps - 1):
        cost, mask = _edge_arrays(spec, t)
        acc += int(cost[mask].max()) if mask.any() else 0
        out.append(acc)
    return out


def build_path_cost(spec, tau: float = 1.0):
    """Cost-carrying chain with both ends projected; the only open leg,
    ``cost``, holds the number of step sequences of each total cost."""
    V, N = spec.vertices, spec.steps
    b = CircuitBuilder([(var_label(t), V) for t in range(N)], tau)
    b.close(var_label(0), _one_hot(V, spec.source))
    b.close(var_label(N - 1), _one_hot(V, spec.sink))
    bounds = cost_bounds(spec)
    prev, prev_ext = None, 1
    for t in range(N - 1):
        cost, mask = _edge_arrays(spec, t)
        ext = bounds[t] + 1
        out = "cost" if t == N - 2 else b.fresh("h")
        table = np.zeros((V, V, prev_ext, ext))
        for j, i in zip(*np.nonzero(mask)):
            step = int(cost[j, i])
            for k in range(prev_ext):
                table[j, i, k, k + step] = 1
        legs = [(b.copy(var_label(t)), V)]
        if prev is None:
            table = table[:, :, 0, :]
        else:
            legs.append((prev, prev_ext))
        b.port(var_label(t + 1), legs + [(out, ext)], table)
        prev, prev_ext = out, ext
    b.readout("cost", prev_ext)
    return b.build()


def build_tsp(spec, tau: float = 1.0, fixed=None, layer_limit=None):
    """Tour through city V-1 and then x_0, ..., x_{V-2}, back to V-1.

    Without a limit, V-2 exactly-once layers cover cities 0..V-3 (the last
    remaining variable is then forced onto V-2). With ``layer_limit`` L only
    the first L cities not yet placed in ``fixed`` get a layer, and cities
    already placed are masked out of every free variable.
    """
    V = spec.V
    n = V - 1
    E = spec.E
    labels = [var_label(i) for i in range(n)]
    b = CircuitBuilder([(lab, n) for lab in labels], tau)

    def edge_vec(pairs):
        cost = np.array([0.0 if c is None else c for c in pairs])
        return cost, np.array([c is not None for c in pairs])

    start_cost, start_mask = edge_vec([E[V - 1][j] for j in range(n)])
    end_cost, end_mask = edge_vec([E[i][V - 1] for i in range(n)])
    local = [np.ones(n) for _ in range(n)]
    local[0] = local[0] * b.evolve(start_cost, start_mask)
    local[-1] = local[-1] * b.evolve(end_cost, end_mask)

    fixed = dict(fixed or {})
    if layer_limit is None:
        layer_values = list(range(V - 2))
    else:
        used = {int(v) for v in fixed.values()}
        for k, lab in enumerate(labels):
            if lab not in fixed:
                local[k] = local[k] * np.array([0.0 if v in used else 1.0 for v in range(n)])
        layer_values = [v for v in range(V - 2) if v not in used][: max(int(layer_limit), 0)]

    for k in range(n):
        b.weight(labels[k], local[k])
    for t in range(n - 1):
        cost = np.zeros((n, n))
        mask = np.zeros((n, n), bool)
        for i in range(n):
            for j in range(n):
                if i != j and E[i][j] is not None:
                    cost[j, i] = E[i][j]
                    mask[j, i] = True
        b.port(labels[t + 1], [(b.copy(labels[t]), n)], b.evolve(cost, mask))
    for value in layer_values:
        attach_count_layer(b, labels, value, 1, exact=True)
    return b.build()
