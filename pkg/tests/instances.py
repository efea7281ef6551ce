"""Random desk-scale instances shared by the test modules."""

from __future__ import annotations

import itertools
import math

import numpy as np

from tnsolve.network import attach_boundaries, contract
from tnsolve.oracle import verify
from tnsolve.problems import build
from tnsolve.tensor import make_plus, make_projection

from tnsolve.problems.specs import (
    Assignment,
    DominatingSet,
    Hobo,
    Ilp,
    Ipp,
    Iqp,
    Knapsack,
    Mis,
    Nested,
    Qubo,
    Qudo,
    SumFunction,
    Tqudo,
    Tsp,
    VertexCover,
)


def _ints(rng, lo, hi, shape=None):
    return rng.integers(lo, hi + 1, size=shape).tolist()


def random_graph(rng, n, p=0.4):
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


def qubo(rng):
    n = int(rng.integers(2, 9))
    Q = [[int(rng.integers(-5, 6)) if j <= i and rng.random() < 0.7 else 0 for j in range(n)] for i in range(n)]
    return Qubo(Q)


def qudo(rng):
    n = int(rng.integers(2, 5))
    dims = _ints(rng, 2, 4, n)
    Q = [[int(rng.integers(-3, 4)) if j <= i else 0 for j in range(n)] for i in range(n)]
    return Qudo(Q, dims)


def tqudo(rng):
    n = int(rng.integers(2, 5))
    dims = _ints(rng, 2, 3, n)
    terms = []
    for _ in range(int(rng.integers(1, 2 * n))):
        i, j = (int(v) for v in rng.integers(0, n, 2))
        terms.append((i, j, _ints(rng, -4, 4, (dims[i], dims[j]))))
    return Tqudo(dims, terms)


def hobo(rng):
    n = int(rng.integers(3, 8))
    terms = []
    for _ in range(int(rng.integers(2, 2 * n))):
        order = int(rng.integers(1, 4))
        vs = sorted(int(v) for v in rng.choice(n, size=min(order, n), replace=False))
        terms.append((vs, int(rng.integers(-5, 6))))
    return Hobo(terms, [2] * n)


def sum_function(rng):
    n = int(rng.integers(2, 6))
    dims = _ints(rng, 2, 3, n)
    a = _ints(rng, -3, 3, n)
    target = int(rng.integers(-3, 6))
    if rng.random() < 0.5:
        return SumFunction.linear(a, lambda z: (z - target) ** 2, dims)
    g = [_ints(rng, -2, 3, d) for d in dims]
    lo, hi = sum(min(r) for r in g), sum(max(r) for r in g)
    f = _ints(rng, -6, 6, hi - lo + 1)
    return SumFunction(g, f, lo)


def nested(rng):
    n = int(rng.integers(2, 6))
    dims = _ints(rng, 2, 3, n)
    width = int(rng.integers(2, 5))
    tables = [[[int(rng.integers(0, width))] for _ in range(dims[0])]]
    for i in range(1, n):
        hi = width - 1 if i < n - 1 else 6
        lo = 0 if i < n - 1 else -6
        tables.append(_ints(rng, lo, hi, (dims[i], width)))
    return Nested(tables, 0)


def knapsack(rng, variant=None):
    variant = variant or str(rng.choice(["linear", "nonlinear", "polynomial"]))
    n = int(rng.integers(2, 6))
    caps = _ints(rng, 1, 2, n)
    if variant == "linear":
        return Knapsack(_ints(rng, 0, 5, n), _ints(rng, 0, 6, n), caps, int(rng.integers(0, 13)))
    weights = [[0] + _ints(rng, 0, 5, c) for c in caps]
    values = [[0] + _ints(rng, -1, 6, c) for c in caps]
    if variant == "nonlinear":
        return Knapsack(weights, values, caps, int(rng.integers(0, 13)), "nonlinear")
    poly = [int(rng.integers(0, 3)), int(rng.integers(-1, 3)), int(rng.integers(0, 2))]
    return Knapsack(weights, values, caps, int(rng.integers(0, 30)), "polynomial", poly)


def _constraints(rng, dims):
    m = int(rng.integers(1, 3))
    A = [_ints(rng, 0, 3, len(dims)) for _ in range(m)]
    b = _ints(rng, 0, 6, m)
    return A, b


def ilp(rng):
    n = int(rng.integers(2, 5))
    dims = _ints(rng, 2, 4, n)
    A, b = _constraints(rng, dims)
    return Ilp(_ints(rng, -3, 5, n), A, b, dims)


def iqp(rng):
    n = int(rng.integers(2, 5))
    dims = _ints(rng, 2, 4, n)
    A, b = _constraints(rng, dims)
    return Iqp(_ints(rng, -2, 2, (n, n)), _ints(rng, -3, 3, n), A, b, dims)


def ipp(rng):
    n = int(rng.integers(2, 5))
    dims = _ints(rng, 2, 3, n)
    A, b = _constraints(rng, dims)
    terms = []
    for _ in range(int(rng.integers(1, 2 * n))):
        order = int(rng.integers(1, 4))
        vs = [int(v) for v in rng.integers(0, n, order)]
        terms.append((vs, int(rng.integers(-4, 5))))
    return Ipp(terms, A, b, dims)


def mis(rng):
    n = int(rng.integers(3, 10))
    return Mis(n, random_graph(rng, n))


def vertex_cover(rng):
    n = int(rng.integers(3, 10))
    return VertexCover(n, random_graph(rng, n))


def dominating_set(rng):
    n = int(rng.integers(3, 10))
    return DominatingSet(n, random_graph(rng, n), _ints(rng, 1, 4, n))


def assignment(rng):
    agents = int(rng.integers(1, 5))
    tasks = int(rng.integers(2, 5))
    C = [[0] + _ints(rng, 0, 9, tasks - 1) for _ in range(agents)]
    return Assignment(C)


def tsp(rng, V):
    pts = rng.integers(0, 10, size=(V, 2))
    E = [[int(abs(pts[i] - pts[j]).sum()) + int(rng.integers(0, 3)) * (i != j) for j in range(V)] for i in range(V)]
    E = [[min(E[i][j], E[j][i]) for j in range(V)] for i in range(V)]
    return Tsp(E)


OPTIMIZATION = {
    "qubo": qubo,
    "qudo": qudo,
    "tqudo": tqudo,
    "hobo": hobo,
    "sum_function": sum_function,
    "nested": nested,
    "knapsack_linear": lambda rng: knapsack(rng, "linear"),
    "knapsack_nonlinear": lambda rng: knapsack(rng, "nonlinear"),
    "knapsack_polynomial": lambda rng: knapsack(rng, "polynomial"),
    "ilp": ilp,
    "iqp": iqp,
    "ipp": ipp,
    "mis": mis,
    "vertex_cover": vertex_cover,
    "dominating_set": dominating_set,
    "assignment": assignment,
}


def batch(name: str, count: int, seed: int = 0):
    rng = np.random.default_rng([seed, sum(map(ord, name))])
    return [OPTIMIZATION[name](rng) for _ in range(count)]


def states(spec):
    return itertools.product(*[range(d) for d in spec.dims()])


def closed_value(spec, tau, x=None):
    """Network value with every variable closed by plus vectors, or by the
    projections of ``x``; other open legs get plus vectors."""
    net, layout = build(spec, tau)
    bounds = {}
    for i, (label, d) in enumerate(layout.variables[: len(spec.dims())]):
        bounds[layout.leg(label)] = make_plus(d) if x is None else make_projection(d, x[i])
    for leg in net.open_legs:
        bounds.setdefault(leg, make_plus(net.leg_extent(leg)))
    t, ls = contract(attach_boundaries(net, bounds))
    if t.nnz == 0:
        return 0.0
    return complex(t.value()).real * math.exp(ls + layout.log_shift)


def brute_weight(spec, tau, x):
    ok, cost = verify(spec, x)
    return math.exp(-tau * cost) if ok else 0.0
