"""Brute-force and dynamic-programming references.

Nothing here touches tensors: every family's constraints and cost are
evaluated directly from the instance data, one assignment at a time.
Maximization families report ``cost = -objective`` so that lower is always
better.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

DEFAULT_BUDGET = 2**20


class OracleError(ValueError):
    pass


class BudgetExceeded(OracleError):
    pass


@dataclass
class OracleResult:
    best_cost: float | None
    argmin: list[tuple[int, ...]]
    feasible_count: int
    evaluations: int
    feasible: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def is_feasible(self) -> bool:
        return bool(self.argmin)


def _poly_value(terms, x) -> float:
    total = 0.0
    for vs, w in terms:
        if isinstance(w, tuple):
            t = w
            for v in vs:
                t = t[x[v]]
            total += t
        else:
            p = w
            for v in vs:
                p *= x[v]
            total += p
    return total


def _quadratic(Q, x, full=False) -> float:
    n = len(x)
    return sum(Q[i][j] * x[i] * x[j] for i in range(n) for j in range(n) if full or j <= i)


def _row_sums(A, x):
    return [sum(a * xj for a, xj in zip(row, x)) for row in A]


def _route_cost(spec, x):
    if x[0] != spec.source or x[-1] != spec.sink:
        return False, math.inf
    total = 0.0
    for t in range(len(x) - 1):
        i, j = x[t], x[t + 1]
        if i == j:
            continue
        m = spec.edges[t] if spec.time_dependent else spec.edges
        if m[i][j] is None:
            return False, math.inf
        total += m[i][j]
    return True, total


def _tsp(spec, x):
    V = spec.V
    if sorted(x) != list(range(V - 1)):
        return False, math.inf
    tour = [V - 1] + list(x) + [V - 1]
    total = 0.0
    for a, b in zip(tour, tour[1:]):
        if spec.E[a][b] is None:
            return False, math.inf
        total += spec.E[a][b]
    return True, total


def _neighbourhoods(n, edges):
    nb = [{v} for v in range(n)]
    for u, v in edges:
        nb[u].add(v)
        nb[v].add(u)
    return nb


def verify(spec, assignment: Sequence[int]) -> tuple[bool, float]:
    """Feasibility and cost of one assignment (cost 0 for pure feasibility families)."""
    x = [int(v) for v in assignment]
    dims = spec.dims()
    if len(x) != len(dims):
        raise OracleError(f"expected {len(dims)} values, got {len(x)}")
    for v, d in zip(x, dims):
        if not 0 <= v < d:
            raise OracleError(f"value {v} outside [0, {d})")
    fam = spec.family

    if fam in ("qubo", "qudo"):
        return True, _quadratic(spec.Q, x)
    if fam == "tqudo":
        return True, sum(t[x[i]][x[j]] for i, j, t in spec.terms)
    if fam == "hobo":
        return True, _poly_value(spec.terms, x)
    if fam == "sum_function":
        return True, spec.f[sum(g[v] for g, v in zip(spec.g, x)) - spec.f_offset]
    if fam == "nested":
        q = spec.tables[0][x[0]][0]
        for i in range(1, len(x)):
            q = spec.tables[i][x[i]][q - spec.q_offset]
        return True, q

    if fam == "addition_inv":
        a = sum(x[2 * i] << i for i in range(spec.n))
        b = sum(x[2 * i + 1] << i for i in range(spec.n))
        return a + b == spec.c, 0.0
    if fam == "multiplication_inv":
        a = sum(x[i] << i for i in range(spec.n_a))
        b = sum(x[spec.n_a + j] << j for j in range(spec.n_b))
        return a * b == spec.c, 0.0
    if fam == "linear_system":
        return _row_sums(spec.A, x) == list(spec.b), 0.0

    if fam == "single_one":
        return sum(x) == 1, 0.0
    if fam == "partition":
        first = sum(s for s, v in zip(spec.S, x) if v == 0)
        return 2 * first == sum(spec.S), 0.0
    if fam == "coloring":
        ok = all(x[u] != x[v] for u, v in spec.edges)
        cost = 0.0
        if spec.vertex_costs is not None:
            cost += sum(spec.vertex_costs[v][c] for v, c in enumerate(x))
        if spec.minimize_colors:
            cost += sum(x)
        return ok, (cost if ok else math.inf)

    if fam in ("shortest_path_route", "shortest_path_cost"):
        return _route_cost(spec, x)
    if fam == "tsp":
        return _tsp(spec, x)

    if fam == "mis":
        ok = all(not (x[u] and x[v]) for u, v in spec.edges)
        return ok, (-sum(x) if ok else math.inf)
    if fam == "vertex_cover":
        ok = all(x[u] or x[v] for u, v in spec.edges)
        return ok, (sum(x) if ok else math.inf)
    if fam == "dominating_set":
        nb = _neighbourhoods(spec.vertices, spec.edges)
        ok = all(any(x[u] for u in nb[v]) for v in range(spec.vertices))
        cost = sum(spec.cost_of(v) for v in range(spec.vertices) if x[v])
        return ok, (cost if ok else math.inf)
    if fam == "knapsack":
        if spec.variant == "linear":
            w = sum(wi * xi for wi, xi in zip(spec.weights, x))
            val = sum(vi * xi for vi, xi in zip(spec.values, x))
        else:
            w = sum(spec.weights[i][xi] for i, xi in enumerate(x))
            val = sum(spec.values[i][xi] for i, xi in enumerate(x))
        load = w if spec.variant != "polynomial" else sum(a * w**k for k, a in enumerate(spec.poly))
        ok = load <= spec.capacity
        return ok, (-val if ok else math.inf)
    if fam == "assignment":
        done = [t for t in x if t != 0]
        ok = len(done) == len(set(done))
        cost = sum(spec.C[i][t] for i, t in enumerate(x)) - spec.penalty * len(done)
        return ok, (cost if ok else math.inf)
    if fam in ("ilp", "iqp", "ipp"):
        ok = all(s <= bi for s, bi in zip(_row_sums(spec.A, x), spec.b))
        if fam == "ilp":
            cost = -sum(c * v for c, v in zip(spec.c, x))
        elif fam == "iqp":
            cost = _quadratic(spec.Q, x, full=True) + sum(c * v for c, v in zip(spec.c, x))
        else:
            cost = _poly_value(spec.terms, x)
        return ok, (cost if ok else math.inf)
    raise OracleError(f"unknown family {fam!r}")


def enumerate_spec(spec, limit: int = DEFAULT_BUDGET, keep_feasible: bool = True) -> OracleResult:
    """Exhaustive lexicographic scan of the whole search space."""
    dims = spec.dims()
    states = math.prod(dims)
    if states > limit:
        raise BudgetExceeded(f"{states} states exceed the budget of {limit}")
    best = math.inf
    argmin: list[tuple[int, ...]] = []
    feasible: list[tuple[int, ...]] = []
    count = 0
    for x in itertools.product(*(range(d) for d in dims)):
        ok, cost = verify(spec, x)
        if not ok:
            continue
        count += 1
        if keep_feasible:
            feasible.append(x)
        if cost < best:
            best, argmin = cost, [x]
        elif cost == best:
            argmin.append(x)
    return OracleResult(best if argmin else None, argmin, count, states, feasible)


def knapsack_dp(spec) -> OracleResult:
    """Bounded knapsack by dynamic programming over the exact total weight.

    ``best[w]`` is the largest value of any selection of the items seen so
    far whose weights add up to exactly ``w``; the load limit is applied to
    the finished table so the polynomial variant is handled too.
    """
    n = len(spec.caps)
    tables = []
    for i, c in enumerate(spec.caps):
        if spec.variant == "linear":
            tables.append([(spec.weights[i] * x, spec.values[i] * x) for x in range(c + 1)])
        else:
            tables.append([(spec.weights[i][x], spec.values[i][x]) for x in range(c + 1)])
    best: dict[int, tuple[float, tuple[int, ...]]] = {0: (0.0, ())}
    evaluations = 0
    for i in range(n):
        nxt: dict[int, tuple[float, tuple[int, ...]]] = {}
        for w, (val, choice) in sorted(best.items()):
            for x, (wx, vx) in enumerate(tables[i]):
                evaluations += 1
                key = w + wx
                cand = (val + vx, choice + (x,))
                old = nxt.get(key)
                if old is None or cand[0] > old[0] or (cand[0] == old[0] and cand[1] < old[1]):
                    nxt[key] = cand
        best = nxt

    def load(w):
        if spec.variant != "polynomial":
            return w
        return sum(a * w**k for k, a in enumerate(spec.poly))

    ok = [(v, c) for w, (v, c) in best.items() if load(w) <= spec.capacity]
    if not ok:
        return OracleResult(None, [], 0, evaluations)
    top = max(v for v, _ in ok)
    argmin = sorted(c for v, c in ok if v == top)
    return OracleResult(-top, argmin, len(ok), evaluations)
