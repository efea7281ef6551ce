"""Inversion and constraint-satisfaction families: binary adders and
multipliers run backwards, linear systems, Single One Input, partition and
graph colouring.

All amplitudes here are 0/1 logic tables except the optional colouring
weights.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..tensor import make_projection
from .layers import CircuitBuilder, attach_count_layer, attach_sum_chain, var_label


def _variables(dims):
    return [(var_label(i), d) for i, d in enumerate(dims)]


def logic_cell(b: CircuitBuilder, host: str, sources: list[str], inputs: list[tuple[str, int]],
               outputs: list[int], fn) -> list[str]:
    """Logic element on ``host``'s train.

    ``fn(host_value, source_values, input_values)`` returns the tuple of
    output signal values, or None to reject the combination. Sources are
    other variables reached through copy ports; inputs are existing signal
    legs. Returns the labels of the new output legs.
    """
    src_legs = [(b.copy(s), b.dim(s)) for s in sources]
    out_legs = [(b.fresh("o"), d) for d in outputs]
    dims = [b.dim(host)] + [d for _, d in src_legs] + [d for _, d in inputs] + outputs
    table = np.zeros(dims)
    ns, ni = len(src_legs), len(inputs)
    for idx in itertools.product(*(range(d) for d in dims[: 1 + ns + ni])):
        out = fn(idx[0], idx[1 : 1 + ns], idx[1 + ns :])
        if out is None:
            continue
        out = tuple(out)
        if all(0 <= o < d for o, d in zip(out, outputs)):
            table[idx + out] = 1
    b.port(host, src_legs + list(inputs) + out_legs, table)
    return [lab for lab, _ in out_legs]


def _project(b: CircuitBuilder, label: str, value: int) -> None:
    b.node(make_projection(2, value), [label])


def build_addition(spec, tau: float = 1.0):
    """Ripple-carry adder with every output bit projected onto ``c``.

    Variables interleave the bits, least significant first: a_0, b_0, a_1, ...
    Each cell sits on the train of b_i and reads a_i through a copy.
    """
    n = spec.n
    b = CircuitBuilder(_variables(spec.dims()), tau)
    carry = None
    for i in range(n):
        a_lab, b_lab = var_label(2 * i), var_label(2 * i + 1)
        inputs = [] if carry is None else [(carry, 2)]

        def add(h, src, ins):
            t = h + src[0] + (ins[0] if ins else 0)
            return (t % 2, t // 2)

        s_leg, carry = logic_cell(b, b_lab, [a_lab], inputs, [2, 2], add)
        _project(b, s_leg, (spec.c >> i) & 1)
    _project(b, carry, (spec.c >> n) & 1)
    return b.build()


def build_multiplication(spec, tau: float = 1.0):
    """Array multiplier: row j conditionally adds a shifted by j into a
    running register, one conditional-adder cell per bit of a.

    Cells of row j live on the train of b_j and read a_i through copies.
    A register bit is final once no later row reaches it; it is then
    projected onto the matching bit of ``c``.
    """
    na, nb = spec.n_a, spec.n_b
    b = CircuitBuilder(_variables(spec.dims()), tau)
    a_labs = [var_label(i) for i in range(na)]
    b_labs = [var_label(na + j) for j in range(nb)]
    reg: dict[int, str] = {}
    for j in range(nb):
        carry = None
        for i in range(na):
            k = i + j
            inputs = []
            if k in reg:
                inputs.append((reg.pop(k), 2))
            if carry is not None:
                inputs.append((carry, 2))

            def cadd(h, src, ins):
                t = h * src[0] + sum(ins)
                return (t % 2, t // 2)

            reg[k], carry = logic_cell(b, b_labs[j], [a_labs[i]], inputs, [2, 2], cadd)
        reg[j + na] = carry
        _project(b, reg.pop(j), (spec.c >> j) & 1)
    for k in sorted(reg):
        _project(b, reg.pop(k), (spec.c >> k) & 1)
    return b.build()


def build_linear_system(spec, tau: float = 1.0):
    """One running dot-product chain per row, closed by an equality filter."""
    dims = spec.dims()
    b = CircuitBuilder(_variables(dims), tau)
    for row, bi in zip(spec.A, spec.b):
        cols = [j for j, a in enumerate(row) if a != 0]
        if not cols:
            if bi != 0:
                b.weight(var_label(0), np.zeros(dims[0]))
            continue
        contrib = [[row[j] * x for x in range(dims[j])] for j in cols]
        attach_sum_chain(b, [var_label(j) for j in cols], contrib, lambda z, bi=bi: (z == bi).astype(float), cap=bi)
    return b.build()


def build_single_one(spec, tau: float = 1.0):
    b = CircuitBuilder(_variables(spec.dims()), tau)
    attach_count_layer(b, [var_label(i) for i in range(spec.n)], 1, 1, exact=True)
    return b.build()


def build_partition(spec, tau: float = 1.0):
    """Running sum of the elements sent to the second set must reach half the total."""
    S = spec.S
    b = CircuitBuilder(_variables(spec.dims()), tau)
    total = sum(S)
    half = total // 2 if total % 2 == 0 else -1
    contrib = [[0, s] for s in S]
    attach_sum_chain(b, [var_label(i) for i in range(len(S))], contrib,
                     lambda z: (z == half).astype(float), cap=max(half, 0))
    return b.build()


def build_coloring(spec, tau: float = 1.0):
    """Edge filters [colour differs] fused on the higher endpoint, plus
    optional imaginary-time weights per vertex colour."""
    k = spec.k
    b = CircuitBuilder([(var_label(v), k) for v in range(spec.vertices)], tau)
    differ = 1.0 - np.eye(k)
    for u, v in sorted((min(e), max(e)) for e in spec.edges):
        b.port(var_label(v), [(b.copy(var_label(u)), k)], differ)
    if spec.vertex_costs is not None or spec.minimize_colors:
        for v in range(spec.vertices):
            cost = np.zeros(k)
            if spec.vertex_costs is not None:
                cost = cost + np.asarray(spec.vertex_costs[v], dtype=float)
            if spec.minimize_colors:
                cost = cost + np.arange(k)
            b.weight(var_label(v), b.evolve(cost))
    return b.build()
