"""Cost-only families: quadratic and higher-order polynomial costs, a function
of an integer sum, and nested cost functions.

Every polynomial-like cost is first reduced to a dictionary of terms keyed by
the sorted tuple of distinct variables it touches, each holding a table over
their values. One-variable terms become local weights on the variable's
train; a term over several variables becomes one fused element on the train
of its highest variable, fed by copies from the others.
"""

from __future__ import annotations

import itertools

import numpy as np

from .layers import CircuitBuilder, attach_sum_chain, var_label
from .specs import Hobo, Nested, Qubo, Qudo, SumFunction, Tqudo


def _add(terms: dict, key: tuple, table: np.ndarray) -> None:
    if key in terms:
        terms[key] = terms[key] + table
    else:
        terms[key] = np.array(table, dtype=float)


def quadratic_terms(Q, dims, full: bool = False) -> dict:
    """Terms of sum Q[i][j] x_i x_j over j <= i (or over all i, j with ``full``)."""
    n = len(dims)
    terms: dict = {}
    for i in range(n):
        for j in range(n):
            if not full and j > i:
                continue
            q = Q[i][j]
            if q == 0:
                continue
            if i == j:
                x = np.arange(dims[i])
                _add(terms, (i,), q * x * x)
            else:
                lo, hi = min(i, j), max(i, j)
                _add(terms, (lo, hi), q * np.outer(np.arange(dims[lo]), np.arange(dims[hi])))
    return terms


def linear_terms(terms: dict, c, dims) -> dict:
    for i, ci in enumerate(c):
        if ci != 0:
            _add(terms, (i,), ci * np.arange(dims[i]))
    return terms


def table_terms(entries, dims) -> dict:
    """Terms from ``(i, j, table)`` pairs; a diagonal term reads x_i twice."""
    terms: dict = {}
    for i, j, table in entries:
        t = np.asarray(table, dtype=float)
        if i == j:
            _add(terms, (i,), np.diagonal(t).copy())
        elif i < j:
            _add(terms, (i, j), t)
        else:
            _add(terms, (j, i), t.T)
    return terms


def poly_terms(entries, dims) -> dict:
    """Terms from ``(variables, coefficient-or-table)``; repeated variables
    are merged into one index (a table is read on its diagonal)."""
    terms: dict = {}
    for vs, w in entries:
        key = tuple(sorted(set(vs)))
        pos = {v: k for k, v in enumerate(key)}
        table = np.zeros([dims[v] for v in key])
        wt = np.asarray(w, dtype=float) if isinstance(w, tuple) else None
        for vals in itertools.product(*(range(dims[v]) for v in key)):
            args = [vals[pos[v]] for v in vs]
            if wt is None:
                table[vals] = w * float(np.prod(args))
            else:
                table[vals] = wt[tuple(args)]
        if np.any(table != 0):
            _add(terms, key, table)
    return terms


def attach_terms(b: CircuitBuilder, terms: dict, labels) -> None:
    """Wire cost terms as imaginary-time weights."""
    for key in sorted(terms, key=lambda k: (k[-1], k)):
        table = terms[key]
        if len(key) == 1:
            b.weight(labels[key[0]], b.evolve(table))
            continue
        legs = []
        for v in key[:-1]:
            legs.append((b.copy(labels[v]), b.dim(labels[v])))
        amp = b.evolve(np.moveaxis(table, -1, 0))
        b.port(labels[key[-1]], legs, amp)


def _variables(dims):
    return [(var_label(i), d) for i, d in enumerate(dims)]


def spec_terms(spec) -> dict:
    if isinstance(spec, (Qubo, Qudo)):
        return quadratic_terms(spec.Q, spec.dims())
    if isinstance(spec, Tqudo):
        return table_terms(spec.terms, spec.dims())
    if isinstance(spec, Hobo):
        return poly_terms(spec.terms, spec.dims())
    raise TypeError(f"no polynomial terms for {spec.family}")


def build_quadratic(spec, tau: float = 1.0):
    dims = spec.dims()
    b = CircuitBuilder(_variables(dims), tau)
    attach_terms(b, spec_terms(spec), [var_label(i) for i in range(len(dims))])
    return b.build()


build_hobo = build_quadratic


def build_sum_function(spec: SumFunction, tau: float = 1.0):
    dims = spec.dims()
    b = CircuitBuilder(_variables(dims), tau)
    f = np.asarray(spec.f, dtype=float)
    labels = [var_label(i) for i in range(len(dims))]
    attach_sum_chain(b, labels, spec.g, lambda z: b.evolve(f[z - spec.f_offset]))
    return b.build()


def build_nested(spec: Nested, tau: float = 1.0):
    dims = spec.dims()
    n = len(dims)
    b = CircuitBuilder(_variables(dims), tau)
    labels = [var_label(i) for i in range(n)]
    t0 = np.asarray(spec.tables[0], dtype=np.int64)[:, 0]
    if n == 1:
        b.weight(labels[0], b.evolve(t0))
        return b.build()
    width = len(spec.tables[1][0])
    off = spec.q_offset
    first = np.zeros((dims[0], width))
    first[np.arange(dims[0]), t0 - off] = 1
    prev = b.fresh("q")
    b.port(labels[0], [(prev, width)], first)
    for i in range(1, n):
        t = np.asarray(spec.tables[i], dtype=np.int64)
        if i == n - 1:
            b.port(labels[i], [(prev, width)], b.evolve(t))
            break
        nxt = b.fresh("q")
        table = np.zeros((dims[i], width, width))
        xs, js = np.indices(t.shape)
        ok = (t >= off) & (t < off + width)  # the rest is unreachable
        table[xs[ok], js[ok], t[ok] - off] = 1
        b.port(labels[i], [(prev, width), (nxt, width)], table)
        prev = nxt
    return b.build()
