"""Problem instances for every supported family.

Each family is a frozen dataclass tagged by ``family``. Nested sequences are
stored as tuples so specs hash and compare by value; :func:`spec_from_dict`
and :func:`spec_to_dict` give the JSON mapping used on disk. Infinite edge
costs are written as ``null`` and held as ``None``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Any, ClassVar, Optional


class SpecError(ValueError):
    """Invalid problem data; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _tup(x):
    if isinstance(x, (list, tuple)):
        return tuple(_tup(v) for v in x)
    return x


def _untup(x):
    if isinstance(x, tuple):
        return [_untup(v) for v in x]
    return x


def _ints(name: str, values, *, nonneg: bool = False, positive: bool = False):
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            if isinstance(v, float) and v.is_integer():
                raise SpecError(name, f"expected integers, got float {v!r}")
            raise SpecError(name, f"expected integers, got {v!r}")
        if nonneg and v < 0:
            raise SpecError(name, f"negative value {v}")
        if positive and v <= 0:
            raise SpecError(name, f"non-positive value {v}")


def _reals(name: str, values):
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise SpecError(name, f"expected finite numbers, got {v!r}")


def _matrix(name: str, m, rows: int | None = None, cols: int | None = None):
    if rows is not None and len(m) != rows:
        raise SpecError(name, f"expected {rows} rows, got {len(m)}")
    widths = {len(r) for r in m}
    if len(widths) > 1:
        raise SpecError(name, "ragged matrix")
    if cols is not None and m and widths != {cols}:
        raise SpecError(name, f"expected {cols} columns")


def _graph(name: str, n_vertices: int, edges):
    _ints("vertices", [n_vertices], positive=True)
    seen = set()
    for e in edges:
        if len(e) != 2:
            raise SpecError(name, f"edge {e!r} must have two endpoints")
        _ints(name, e, nonneg=True)
        u, v = e
        if u == v:
            raise SpecError(name, f"self-loop at {u}")
        if u >= n_vertices or v >= n_vertices:
            raise SpecError(name, f"edge {e!r} outside vertex range")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise SpecError(name, f"duplicate edge {e!r}")
        seen.add(key)


def _table_shape(t) -> tuple[int, ...]:
    shape = []
    while isinstance(t, tuple):
        shape.append(len(t))
        t = t[0] if t else None
    return tuple(shape)


def _flat(t):
    if isinstance(t, tuple):
        for v in t:
            yield from _flat(v)
    else:
        yield t


FAMILIES: dict[str, type] = {}


def _family(name: str):
    def deco(cls):
        cls.family = name
        FAMILIES[name] = cls
        return cls

    return deco


class ProblemSpec:
    family: ClassVar[str]
    kind: ClassVar[str]  # "optimization" | "csp" | "inversion" | "readout"

    def dims(self) -> list[int]:
        raise NotImplementedError

    @property
    def n_states(self) -> int:
        return math.prod(self.dims())


# -- unconstrained optimization ------------------------------------------


def _fold_lower(Q) -> tuple:
    n = len(Q)
    out = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if j <= i:
                out[i][j] += Q[i][j]
            else:
                out[j][i] += Q[i][j]
    return _tup(out)


@_family("qubo")
@dataclass(frozen=True)
class Qubo(ProblemSpec):
    """Minimize sum over j <= i of Q[i][j] x_i x_j with binary x."""

    Q: tuple
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        Q = _tup(self.Q)
        _matrix("Q", Q, len(Q), len(Q))
        for row in Q:
            _reals("Q", row)
        object.__setattr__(self, "Q", _fold_lower(Q))

    def dims(self):
        return [2] * len(self.Q)


@_family("qudo")
@dataclass(frozen=True)
class Qudo(ProblemSpec):
    """QUBO cost with x_i in [0, dims[i])."""

    Q: tuple
    var_dims: tuple
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        Q = _tup(self.Q)
        _matrix("Q", Q, len(Q), len(Q))
        for row in Q:
            _reals("Q", row)
        object.__setattr__(self, "Q", _fold_lower(Q))
        d = _tup(self.var_dims)
        _ints("var_dims", d, positive=True)
        if len(d) != len(Q):
            raise SpecError("var_dims", "length must match Q")
        object.__setattr__(self, "var_dims", d)

    def dims(self):
        return list(self.var_dims)


@_family("tqudo")
@dataclass(frozen=True)
class Tqudo(ProblemSpec):
    """Minimize sum of table terms C[i][j][x_i][x_j] (diagonal terms use x_i twice)."""

    var_dims: tuple
    terms: tuple  # ((i, j, table), ...)
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        d = _tup(self.var_dims)
        _ints("var_dims", d, positive=True)
        object.__setattr__(self, "var_dims", d)
        terms = []
        for t in _tup(self.terms):
            if len(t) != 3:
                raise SpecError("terms", "each term is (i, j, table)")
            i, j, table = t
            _ints("terms", [i, j], nonneg=True)
            if i >= len(d) or j >= len(d):
                raise SpecError("terms", f"variable index out of range in ({i}, {j})")
            if _table_shape(table) != (d[i], d[j]):
                raise SpecError("terms", f"table for ({i}, {j}) must be {d[i]}x{d[j]}")
            _reals("terms", list(_flat(table)))
            terms.append((i, j, table))
        object.__setattr__(self, "terms", tuple(terms))

    def dims(self):
        return list(self.var_dims)


def _check_poly_terms(name: str, terms, d):
    out = []
    for t in _tup(terms):
        if len(t) != 2:
            raise SpecError(name, "each term is (variables, coefficient-or-table)")
        vs, w = t
        _ints(name, vs, nonneg=True)
        if not vs:
            raise SpecError(name, "empty variable tuple")
        if any(v >= len(d) for v in vs):
            raise SpecError(name, f"variable out of range in {vs!r}")
        if isinstance(w, tuple):
            if _table_shape(w) != tuple(d[v] for v in vs):
                raise SpecError(name, f"table shape mismatch for {vs!r}")
            _reals(name, list(_flat(w)))
        else:
            _reals(name, [w])
        out.append((tuple(vs), w))
    return tuple(out)


@_family("hobo")
@dataclass(frozen=True)
class Hobo(ProblemSpec):
    """Higher-order terms: coefficient times the product of the listed
    variables, or a table indexed by their values."""

    terms: tuple
    var_dims: tuple
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        d = _tup(self.var_dims)
        _ints("var_dims", d, positive=True)
        object.__setattr__(self, "var_dims", d)
        object.__setattr__(self, "terms", _check_poly_terms("terms", self.terms, d))

    @property
    def order(self) -> int:
        return max((len(set(vs)) for vs, _ in self.terms), default=0)

    def dims(self):
        return list(self.var_dims)


@_family("sum_function")
@dataclass(frozen=True)
class SumFunction(ProblemSpec):
    """Minimize f(sum_i g[i][x_i]); f tabulated from ``f_offset``."""

    g: tuple
    f: tuple
    f_offset: int
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        g = _tup(self.g)
        for row in g:
            if not row:
                raise SpecError("g", "each variable needs at least one value")
            _ints("g", row)
        f = _tup(self.f)
        _reals("f", f)
        _ints("f_offset", [self.f_offset])
        lo = sum(min(r) for r in g)
        hi = sum(max(r) for r in g)
        if lo < self.f_offset or hi >= self.f_offset + len(f):
            raise SpecError("f", f"table must cover sums in [{lo}, {hi}]")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "f", f)

    @classmethod
    def linear(cls, a, f, var_dims=None) -> "SumFunction":
        """Build from coefficients ``a`` and a callable ``f`` over the reachable range."""
        var_dims = list(var_dims) if var_dims is not None else [2] * len(a)
        g = [[ai * x for x in range(d)] for ai, d in zip(a, var_dims)]
        return cls.tabulate(g, f)

    @classmethod
    def tabulate(cls, g, f) -> "SumFunction":
        lo = sum(min(r) for r in g)
        hi = sum(max(r) for r in g)
        return cls(g=_tup(g), f=tuple(f(z) for z in range(lo, hi + 1)), f_offset=lo)

    def f_at(self, z: int) -> float:
        return self.f[z - self.f_offset]

    def dims(self):
        return [len(r) for r in self.g]


@_family("nested")
@dataclass(frozen=True)
class Nested(ProblemSpec):
    """Cost Q_{N-1} with Q_0 = f_0(x_0, 0) and Q_i = f_i(x_i, Q_{i-1}).

    ``tables[i][x][q - q_offset]`` holds f_i(x, q) for q in the signal range
    ``[q_offset, q_offset + width)``; ``tables[0]`` has a single column used
    with q = 0.
    """

    tables: tuple
    q_offset: int
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        tables = _tup(self.tables)
        if not tables:
            raise SpecError("tables", "at least one variable")
        _ints("q_offset", [self.q_offset])
        width = None
        for i, t in enumerate(tables):
            shape = _table_shape(t)
            if len(shape) != 2 or shape[0] < 1:
                raise SpecError("tables", f"table {i} must be 2-D")
            _ints("tables", list(_flat(t)))
            if i == 0:
                if shape[1] != 1:
                    raise SpecError("tables", "tables[0] has exactly one column")
            elif width is None:
                width = shape[1]
            elif shape[1] != width:
                raise SpecError("tables", "all tables after the first share one width")
        if width is None:
            width = 1 if len(tables) == 1 else width
        lo, hi = self.q_offset, self.q_offset + width - 1
        if len(tables) > 1:
            if not lo <= 0 <= hi:
                raise SpecError("q_offset", "signal range must contain 0")
            # only signals that can actually occur have to stay in range
            reach = {row[0] for row in tables[0]}
            for i in range(len(tables) - 1):
                if i > 0:
                    reach = {tables[i][x][q - lo] for x in range(len(tables[i])) for q in reach}
                for v in reach:
                    if not lo <= v <= hi:
                        raise SpecError("tables", f"value {v} of table {i} leaves the signal range")
        object.__setattr__(self, "tables", tables)

    @classmethod
    def from_functions(cls, var_dims, funcs) -> "Nested":
        """Tabulate callables ``funcs[i](x, q)`` over the reachable signal range."""
        reach = [{funcs[0](x, 0) for x in range(var_dims[0])}]
        for i in range(1, len(var_dims)):
            reach.append({funcs[i](x, q) for x in range(var_dims[i]) for q in reach[-1]})
        vals = set().union(*reach[:-1], {0}) if len(var_dims) > 1 else {0}
        lo, hi = min(vals), max(vals)
        tables = [[[funcs[0](x, 0)] for x in range(var_dims[0])]]
        for i in range(1, len(var_dims)):
            tables.append([[funcs[i](x, q) for q in range(lo, hi + 1)] for x in range(var_dims[i])])
        return cls(tables=_tup(tables), q_offset=lo)

    def apply(self, i: int, x: int, q: int) -> int:
        if i == 0:
            return self.tables[0][x][0]
        return self.tables[i][x][q - self.q_offset]

    def dims(self):
        return [len(t) for t in self.tables]


# -- inversion --------------------------------------------------------------


@_family("addition_inv")
@dataclass(frozen=True)
class AdditionInv(ProblemSpec):
    """Find n-bit a, b with a + b = c; variables are bits a_0, b_0, a_1, b_1, ..."""

    c: int
    n: int
    kind: ClassVar[str] = "inversion"

    def __post_init__(self):
        _ints("c", [self.c], nonneg=True)
        _ints("n", [self.n], positive=True)
        if self.c >= 2 ** (self.n + 1):
            raise SpecError("c", f"needs more than {self.n + 1} bits")

    def dims(self):
        return [2] * (2 * self.n)


@_family("multiplication_inv")
@dataclass(frozen=True)
class MultiplicationInv(ProblemSpec):
    """Find a (n_a bits), b (n_b bits) with a * b = c; variables a bits then b bits."""

    c: int
    n_a: int
    n_b: int
    kind: ClassVar[str] = "inversion"

    def __post_init__(self):
        _ints("c", [self.c], nonneg=True)
        _ints("n_a", [self.n_a], positive=True)
        _ints("n_b", [self.n_b], positive=True)
        if self.c >= 2 ** (self.n_a + self.n_b):
            raise SpecError("c", "exceeds the product width")

    def dims(self):
        return [2] * (self.n_a + self.n_b)


@_family("linear_system")
@dataclass(frozen=True)
class LinearSystem(ProblemSpec):
    """Find x with A x = b over nonnegative integers, x_j in [0, var_dims[j])."""

    A: tuple
    b: tuple
    var_dims: tuple
    kind: ClassVar[str] = "inversion"

    def __post_init__(self):
        A, b, d = _tup(self.A), _tup(self.b), _tup(self.var_dims)
        _matrix("A", A, len(b), len(d))
        for row in A:
            _ints("A", row, nonneg=True)
        _ints("b", b, nonneg=True)
        _ints("var_dims", d, positive=True)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "var_dims", d)

    def dims(self):
        return list(self.var_dims)


# -- constraint satisfaction -------------------------------------------------


@_family("single_one")
@dataclass(frozen=True)
class SingleOne(ProblemSpec):
    """Binary strings of length n with exactly one 1."""

    n: int
    kind: ClassVar[str] = "csp"

    def __post_init__(self):
        _ints("n", [self.n], positive=True)

    def dims(self):
        return [2] * self.n


@_family("partition")
@dataclass(frozen=True)
class Partition(ProblemSpec):
    """Split S into two equal-sum sets; x_i = 0 puts S[i] in the first set."""

    S: tuple
    kind: ClassVar[str] = "csp"

    def __post_init__(self):
        S = _tup(self.S)
        if not S:
            raise SpecError("S", "empty set")
        _ints("S", S, positive=True)
        object.__setattr__(self, "S", S)

    def dims(self):
        return [2] * len(self.S)


@_family("coloring")
@dataclass(frozen=True)
class Coloring(ProblemSpec):
    """Proper k-colouring; optional vertex-cost table or colour-sum minimization."""

    vertices: int
    edges: tuple
    k: int
    vertex_costs: Optional[tuple] = None
    minimize_colors: bool = False

    def __post_init__(self):
        edges = _tup(self.edges)
        _graph("edges", self.vertices, edges)
        _ints("k", [self.k], positive=True)
        object.__setattr__(self, "edges", edges)
        if self.vertex_costs is not None:
            vc = _tup(self.vertex_costs)
            _matrix("vertex_costs", vc, self.vertices, self.k)
            for row in vc:
                _reals("vertex_costs", row)
            object.__setattr__(self, "vertex_costs", vc)

    @property
    def kind(self) -> str:
        return "optimization" if (self.vertex_costs is not None or self.minimize_colors) else "csp"

    def dims(self):
        return [self.k] * self.vertices


# -- routes and graphs -------------------------------------------------------


def _edge_matrix(name: str, E, n: int):
    _matrix(name, E, n, n)
    for row in E:
        for v in row:
            if v is not None:
                _reals(name, [v])
                if v < 0:
                    raise SpecError(name, f"negative edge cost {v}")


def _is_stack(E) -> bool:
    return bool(E) and isinstance(E[0], tuple) and bool(E[0]) and isinstance(E[0][0], tuple)


@dataclass(frozen=True)
class _ShortestPath(ProblemSpec):
    vertices: int
    edges: tuple  # one V x V matrix, or one matrix per transition
    source: int
    sink: int
    steps: int

    def __post_init__(self):
        E = _tup(self.edges)
        _ints("vertices", [self.vertices], positive=True)
        _ints("steps", [self.steps])
        if self.steps < 2:
            raise SpecError("steps", "at least 2 positions")
        if _is_stack(E):
            if len(E) != self.steps - 1:
                raise SpecError("edges", f"need {self.steps - 1} per-step matrices")
            for m in E:
                _edge_matrix("edges", m, self.vertices)
        else:
            _edge_matrix("edges", E, self.vertices)
        for name, v in (("source", self.source), ("sink", self.sink)):
            _ints(name, [v], nonneg=True)
            if v >= self.vertices:
                raise SpecError(name, "vertex out of range")
        object.__setattr__(self, "edges", E)

    @property
    def time_dependent(self) -> bool:
        return _is_stack(self.edges)

    def step_cost(self, t: int, i: int, j: int):
        """Cost of moving i -> j on transition t; None when there is no edge."""
        if i == j:
            return 0
        m = self.edges[t] if self.time_dependent else self.edges
        return m[i][j]


@_family("shortest_path_cost")
@dataclass(frozen=True)
class ShortestPathCost(_ShortestPath):
    kind: ClassVar[str] = "readout"

    def __post_init__(self):
        super().__post_init__()
        mats = self.edges if self.time_dependent else (self.edges,)
        for m in mats:
            for row in m:
                for v in row:
                    if v is not None and (isinstance(v, float) and not v.is_integer()):
                        raise SpecError("edges", "cost mode needs integer edge costs")

    def dims(self):
        return [self.vertices] * self.steps


@_family("shortest_path_route")
@dataclass(frozen=True)
class ShortestPathRoute(_ShortestPath):
    kind: ClassVar[str] = "optimization"

    def dims(self):
        return [self.vertices] * self.steps


@_family("tsp")
@dataclass(frozen=True)
class Tsp(ProblemSpec):
    """Closed tour; city V-1 is fixed as start/end, variables visit 0..V-2."""

    E: tuple
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        E = _tup(self.E)
        if len(E) < 3:
            raise SpecError("E", "need at least 3 cities")
        _edge_matrix("E", E, len(E))
        object.__setattr__(self, "E", E)

    @property
    def V(self) -> int:
        return len(self.E)

    def dims(self):
        return [self.V - 1] * (self.V - 1)


@_family("mis")
@dataclass(frozen=True)
class Mis(ProblemSpec):
    vertices: int
    edges: tuple
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        edges = _tup(self.edges)
        _graph("edges", self.vertices, edges)
        object.__setattr__(self, "edges", edges)

    def dims(self):
        return [2] * self.vertices


@_family("vertex_cover")
@dataclass(frozen=True)
class VertexCover(Mis):
    pass


@_family("dominating_set")
@dataclass(frozen=True)
class DominatingSet(ProblemSpec):
    vertices: int
    edges: tuple
    costs: Optional[tuple] = None
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        edges = _tup(self.edges)
        _graph("edges", self.vertices, edges)
        object.__setattr__(self, "edges", edges)
        if self.costs is not None:
            c = _tup(self.costs)
            if len(c) != self.vertices:
                raise SpecError("costs", "one cost per vertex")
            _reals("costs", c)
            object.__setattr__(self, "costs", c)

    def cost_of(self, v: int) -> float:
        return 1.0 if self.costs is None else self.costs[v]

    def dims(self):
        return [2] * self.vertices


# -- assignment --------------------------------------------------------------


@_family("knapsack")
@dataclass(frozen=True)
class Knapsack(ProblemSpec):
    """Maximize total value under a capacity; x_i in [0, caps[i]].

    ``linear``: ``weights``/``values`` hold one number per item.
    ``nonlinear``/``polynomial``: they hold one table per item (index = count).
    ``polynomial`` constrains F(W) <= capacity with F given by ``poly``
    coefficients (constant term first).
    """

    weights: tuple
    values: tuple
    caps: tuple
    capacity: int
    variant: str = "linear"
    poly: Optional[tuple] = None
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        w, v, c = _tup(self.weights), _tup(self.values), _tup(self.caps)
        _ints("caps", c, nonneg=True)
        _ints("capacity", [self.capacity], nonneg=True)
        if not (len(w) == len(v) == len(c)):
            raise SpecError("weights", "weights, values and caps must have equal length")
        if self.variant not in ("linear", "nonlinear", "polynomial"):
            raise SpecError("variant", f"unknown variant {self.variant!r}")
        if self.variant == "linear":
            _ints("weights", w, nonneg=True)
            _reals("values", v)
        else:
            for i, (wi, vi) in enumerate(zip(w, v)):
                if not isinstance(wi, tuple) or len(wi) != c[i] + 1:
                    raise SpecError("weights", f"item {i} needs a table of length caps+1")
                if not isinstance(vi, tuple) or len(vi) != c[i] + 1:
                    raise SpecError("values", f"item {i} needs a table of length caps+1")
                _ints("weights", wi, nonneg=True)
                _reals("values", vi)
        if self.variant == "polynomial":
            if not self.poly:
                raise SpecError("poly", "polynomial variant needs coefficients")
            _reals("poly", _tup(self.poly))
            object.__setattr__(self, "poly", _tup(self.poly))
        elif self.poly is not None:
            raise SpecError("poly", "only the polynomial variant takes coefficients")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "caps", c)

    def weight(self, i: int, x: int) -> int:
        return self.weights[i] * x if self.variant == "linear" else self.weights[i][x]

    def value(self, i: int, x: int) -> float:
        return self.values[i] * x if self.variant == "linear" else self.values[i][x]

    def load(self, total_weight: int) -> float:
        """The constrained quantity: W itself, or F(W) for the polynomial variant."""
        if self.variant != "polynomial":
            return total_weight
        return sum(a * total_weight**k for k, a in enumerate(self.poly))

    def dims(self):
        return [ci + 1 for ci in self.caps]


@_family("assignment")
@dataclass(frozen=True)
class Assignment(ProblemSpec):
    """Agents pick tasks (column 0 = idle, free); each real task at most once.

    Cost is sum C[i][x_i] - lam * (number of real tasks done).
    """

    C: tuple
    lam: Optional[float] = None
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        C = _tup(self.C)
        if not C:
            raise SpecError("C", "at least one agent")
        _matrix("C", C)
        if len(C[0]) < 1:
            raise SpecError("C", "need the idle column")
        for row in C:
            _reals("C", row)
            if row[0] != 0:
                raise SpecError("C", "idle task (column 0) must cost 0")
        if self.lam is not None:
            _reals("lam", [self.lam])
        object.__setattr__(self, "C", C)

    @property
    def penalty(self) -> float:
        if self.lam is not None:
            return float(self.lam)
        return 1.0 + sum(max(r) - min(r) for r in self.C)

    def dims(self):
        return [len(self.C[0])] * len(self.C)


# -- integer programming -----------------------------------------------------


def _check_constraints(A, b, d):
    _matrix("A", A, len(b), len(d))
    for row in A:
        _ints("A", row, nonneg=True)
    _ints("b", b, nonneg=True)
    _ints("var_dims", d, positive=True)


@_family("ilp")
@dataclass(frozen=True)
class Ilp(ProblemSpec):
    """Maximize c.x subject to A x <= b, x_j in [0, var_dims[j])."""

    c: tuple
    A: tuple
    b: tuple
    var_dims: tuple
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        c, A, b, d = _tup(self.c), _tup(self.A), _tup(self.b), _tup(self.var_dims)
        _check_constraints(A, b, d)
        _reals("c", c)
        if len(c) != len(d):
            raise SpecError("c", "one coefficient per variable")
        for k, v in (("c", c), ("A", A), ("b", b), ("var_dims", d)):
            object.__setattr__(self, k, v)

    def dims(self):
        return list(self.var_dims)


@_family("iqp")
@dataclass(frozen=True)
class Iqp(ProblemSpec):
    """Minimize sum_{i,j} Q[i][j] x_i x_j + c.x subject to A x <= b."""

    Q: tuple
    c: tuple
    A: tuple
    b: tuple
    var_dims: tuple
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        Q, c, A, b, d = (_tup(x) for x in (self.Q, self.c, self.A, self.b, self.var_dims))
        _check_constraints(A, b, d)
        _matrix("Q", Q, len(d), len(d))
        for row in Q:
            _reals("Q", row)
        _reals("c", c)
        if len(c) != len(d):
            raise SpecError("c", "one coefficient per variable")
        for k, v in (("Q", Q), ("c", c), ("A", A), ("b", b), ("var_dims", d)):
            object.__setattr__(self, k, v)

    def dims(self):
        return list(self.var_dims)


@_family("ipp")
@dataclass(frozen=True)
class Ipp(ProblemSpec):
    """Minimize a higher-order polynomial (terms as for ``hobo``) subject to A x <= b."""

    terms: tuple
    A: tuple
    b: tuple
    var_dims: tuple
    kind: ClassVar[str] = "optimization"

    def __post_init__(self):
        A, b, d = _tup(self.A), _tup(self.b), _tup(self.var_dims)
        _check_constraints(A, b, d)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "var_dims", d)
        object.__setattr__(self, "terms", _check_poly_terms("terms", self.terms, d))

    def dims(self):
        return list(self.var_dims)


# -- serialization -----------------------------------------------------------


def spec_to_dict(spec: ProblemSpec) -> dict[str, Any]:
    out: dict[str, Any] = {"family": spec.family}
    for f in fields(spec):
        out[f.name] = _untup(getattr(spec, f.name))
    return out


def spec_from_dict(data: dict[str, Any]) -> ProblemSpec:
    if not isinstance(data, dict):
        raise SpecError("<root>", "expected an object")
    fam = data.get("family")
    if fam not in FAMILIES:
        raise SpecError("family", f"unknown family {fam!r}")
    cls = FAMILIES[fam]
    names = {f.name for f in fields(cls)}
    extra = set(data) - names - {"family"}
    if extra:
        raise SpecError(sorted(extra)[0], "unknown field")
    kwargs = {}
    for f in fields(cls):
        if f.name in data:
            kwargs[f.name] = _tup(data[f.name])
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise SpecError(fam, str(exc)) from None
