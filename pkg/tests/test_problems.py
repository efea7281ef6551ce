import math

import numpy as np
import pytest

from tnsolve.network import attach_boundaries, contract_value, TensorNetwork
from tnsolve.oracle import enumerate_spec, verify
from tnsolve.problems import build, build_counting_layer, build_repetition_layer, cost_scale
from tnsolve.problems.specs import (
    AdditionInv,
    Assignment,
    Coloring,
    DominatingSet,
    Hobo,
    Ilp,
    Iqp,
    Knapsack,
    LinearSystem,
    Mis,
    MultiplicationInv,
    Nested,
    Partition,
    Qubo,
    Qudo,
    ShortestPathCost,
    ShortestPathRoute,
    SingleOne,
    SpecError,
    SumFunction,
    Tqudo,
    Tsp,
    VertexCover,
)
from tnsolve.solver import count_solutions, solve
from tnsolve.tensor import make_plus

from instances import OPTIMIZATION, batch, brute_weight, closed_value, random_graph, states

P3 = [(0, 1), (1, 2)]


def best(spec):
    return enumerate_spec(spec).best_cost


# -- unconstrained builders --------------------------------------------------


def test_qubo_example():
    sol = solve(Qubo([[-3, 0], [3, -1]]))
    assert sol.assignment == (1, 0) and sol.cost == -3


def test_qubo_upper_triangle_is_folded():
    assert Qubo([[-3, 3], [0, -1]]) == Qubo([[-3, 0], [3, -1]])


def test_qudo_example():
    sol = solve(Qudo([[1, 0], [-1, 1]], [3, 3]))
    assert sol.assignment == (0, 0) and sol.cost == 0


def test_tqudo_tie_breaks_low():
    sol = solve(Tqudo([2, 2], [(0, 1, [[0, 5], [5, 0]])]))
    assert sol.assignment == (0, 0) and sol.cost == 0


def test_hobo_examples():
    assert solve(Hobo([((2, 1, 0), -5)], [2, 2, 2])).assignment == (1, 1, 1)
    sol = solve(Hobo([((0, 1, 2), -5), ((2,), 3)], [2, 2, 2]))
    assert sol.assignment == (1, 1, 1) and sol.cost == -2
    assert solve(Hobo([((0, 1), 0), ((1, 2), 0)], [2, 2, 2])).assignment == (0, 0, 0)


def test_sum_function_examples():
    sol = solve(SumFunction.linear([1, 2, 3], lambda z: (z - 4) ** 2))
    assert sol.assignment == (1, 0, 1) and sol.cost == 0
    assert solve(SumFunction.linear([1, 1], lambda z: z)).assignment == (0, 0)
    sol = solve(SumFunction.tabulate([[0, 2], [0, -1]], lambda z: z * z))
    assert sol.assignment == (0, 0) and sol.cost == 0


def test_nested_examples():
    spec = Nested.from_functions([2, 2, 2], [lambda x, q: x] + [lambda x, q: q + x] * 2)
    assert solve(spec).assignment == (0, 0, 0)
    spec = Nested.from_functions([2, 2], [lambda x, q: x, lambda x, q: q * (1 - x)])
    sol = solve(spec)
    assert sol.assignment == (0, 0) and sol.cost == 0
    assert solve(Nested([[[7], [0]]], 0)).assignment == (1,)


def test_quadratic_chain_sparsity():
    # bandwidth-m couplings still give at most d^2 stored entries per tensor
    n = 7
    for m in (1, 2, 3):
        Q = [[(1 + i + j) if 0 <= i - j <= m else 0 for j in range(n)] for i in range(n)]
        for spec, d in ((Qubo(Q), 2), (Qudo(Q, [3] * n), 3)):
            net, _ = build(spec)
            assert max(t.nnz for t in net.nodes.values()) <= d * d


def test_zero_couplings_are_omitted():
    net_a, _ = build(Qubo([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    net_b, _ = build(Qubo([[1, 0, 0], [2, 1, 0], [0, 2, 1]]))
    assert len(net_a.nodes) < len(net_b.nodes)


# -- inversion builders ---------------------------------------------------------


def test_addition_examples():
    sol = solve(AdditionInv(3, 2))
    assert sol.feasible and verify(AdditionInv(3, 2), sol.assignment)[0]
    assert solve(AdditionInv(0, 2)).assignment == (0, 0, 0, 0)
    assert not solve(AdditionInv(3, 1)).feasible


def test_multiplication_examples():
    sol = solve(MultiplicationInv(6, 2, 2))
    a = sol.assignment[0] + 2 * sol.assignment[1]
    b = sol.assignment[2] + 2 * sol.assignment[3]
    assert {a, b} == {2, 3}
    assert solve(MultiplicationInv(1, 2, 2)).assignment == (1, 0, 1, 0)
    sol = solve(MultiplicationInv(0, 2, 2))
    assert verify(MultiplicationInv(0, 2, 2), sol.assignment)[0]


def test_linear_system_examples():
    assert solve(LinearSystem([[2, 1], [1, 1]], [5, 3], [4, 4])).assignment == (2, 1)
    assert solve(LinearSystem([[1, 0], [0, 1]], [1, 2], [3, 3])).assignment == (1, 2)
    sol = solve(LinearSystem([[1, 1]], [1], [2, 2]))
    assert sol.assignment in {(0, 1), (1, 0)}


@pytest.mark.parametrize(
    "spec",
    [AdditionInv(c, 2) for c in range(8)]
    + [MultiplicationInv(c, 2, 2) for c in range(16)]
    + [MultiplicationInv(c, 1, 3) for c in (0, 3, 5, 7)]
    + [LinearSystem([[1, 2], [2, 1]], [b0, b1], [3, 3]) for b0 in range(4) for b1 in range(4)],
    ids=str,
)
def test_inversion_input_tensor(spec):
    # the input-side tensor is 1 exactly on preimages of the fixed output
    for x in states(spec):
        got = closed_value(spec, 1.0, x)
        assert got == pytest.approx(1.0 if verify(spec, x)[0] else 0.0, abs=1e-12)


# -- constraint-satisfaction builders -----------------------------------------------


def test_single_one_examples():
    assert count_solutions(SingleOne(3)) == 3
    assert solve(SingleOne(3)).assignment == (0, 0, 1)
    assert solve(SingleOne(1)).assignment == (1,)


def test_partition_examples():
    sol = solve(Partition([1, 2, 3]))
    chosen = [s for s, x in zip([1, 2, 3], sol.assignment) if x]
    assert sum(chosen) == 3
    assert solve(Partition([1, 1])).assignment in {(0, 1), (1, 0)}
    assert not solve(Partition([1, 2])).feasible
    assert count_solutions(Partition([1, 1])) == 2


def test_coloring_examples():
    triangle = [(0, 1), (1, 2), (0, 2)]
    assert count_solutions(Coloring(3, triangle, 3)) == 6
    assert solve(Coloring(2, [(0, 1)], 2)).assignment == (0, 1)
    assert not solve(Coloring(3, triangle, 2)).feasible


def test_coloring_optimization_variants():
    spec = Coloring(3, P3, 3, vertex_costs=[[5, 0, 1], [0, 4, 4], [3, 3, 0]])
    assert solve(spec).cost == best(spec)
    spec = Coloring(4, [(0, 1), (1, 2), (2, 3), (0, 3)], 3, minimize_colors=True)
    sol = solve(spec)
    assert sol.cost == best(spec) and max(sol.assignment) == 1


def csp_instances():
    rng = np.random.default_rng(11)
    out = [SingleOne(n) for n in range(1, 7)]
    for _ in range(10):
        n = int(rng.integers(2, 7))
        out.append(Coloring(n, random_graph(rng, n, 0.5), int(rng.integers(1, 4))))
    for _ in range(10):
        out.append(Partition(rng.integers(1, 7, size=int(rng.integers(1, 8))).tolist()))
    return out


@pytest.mark.parametrize("spec", csp_instances(), ids=str)
def test_csp_count_matches_enumeration(spec):
    assert count_solutions(spec) == enumerate_spec(spec).feasible_count


# -- routes --------------------------------------------------------------------------


def line_graph():
    return [[0, 1, 3], [None, 0, 1], [None, None, 0]]


def test_shortest_path_examples():
    sol = solve(ShortestPathCost(3, line_graph(), 0, 2, 3))
    assert sol.cost == 2
    assert sol.extras["histogram"][:5] == [0, 0, 1, 2, 0]
    assert solve(ShortestPathRoute(3, line_graph(), 0, 2, 3)).assignment == (0, 1, 2)
    assert solve(ShortestPathCost(3, line_graph(), 1, 1, 3)).cost == 0
    assert not solve(ShortestPathCost(3, line_graph(), 2, 0, 3)).feasible
    assert not solve(ShortestPathRoute(3, line_graph(), 2, 0, 3)).feasible


def test_shortest_path_time_dependent():
    free = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    jam = [[0, 9, 5], [9, 0, 9], [5, 9, 0]]
    spec = ShortestPathRoute(3, [free, jam], 0, 2, 3)
    sol = solve(spec)
    assert sol.cost == best(spec) == 5


def test_tsp_examples():
    E = [[0, 1, 4, 2], [1, 0, 2, 5], [4, 2, 0, 3], [2, 5, 3, 0]]
    assert solve(Tsp(E)).cost == best(Tsp(E))
    E3 = [[0, 2, 3], [2, 0, 4], [3, 4, 0]]
    assert solve(Tsp(E3)).cost == 9
    rng = np.random.default_rng(5)
    from instances import tsp as random_tsp
    from tnsolve.solver import SolverConfig

    spec = random_tsp(rng, 5)
    sol = solve(spec, SolverConfig(layer_limit=1))
    assert sol.feasible and sorted(sol.assignment) == list(range(4))


# -- selection and integer programs ---------------------------------------------


def test_graph_examples():
    assert solve(Mis(3, P3)).assignment == (1, 0, 1)
    assert solve(Mis(3, P3)).cost == -2
    assert solve(VertexCover(3, P3)).assignment == (0, 1, 0)
    assert solve(DominatingSet(3, P3)).assignment == (0, 1, 0)


def test_knapsack_examples():
    sol = solve(Knapsack([2, 3], [3, 4], [1, 1], 5))
    assert sol.assignment == (1, 1) and sol.cost == -7
    assert solve(Knapsack([2, 3], [3, 4], [1, 1], 0)).assignment == (0, 0)
    sol = solve(Knapsack([[0, 3, 4]], [[0, 1, 5]], [2], 4, "nonlinear"))
    assert sol.assignment == (2,) and sol.cost == -5


def test_assignment_examples():
    assert solve(Assignment([[0, 1, 9], [0, 9, 1]])).assignment == (1, 2)
    assert solve(Assignment([[0, 5]])).assignment == (1,)
    assert sorted(solve(Assignment([[0, 3], [0, 3]])).assignment) == [0, 1]


def test_integer_program_examples():
    sol = solve(Ilp([2, 3], [[1, 1]], [2], [3, 3]))
    assert sol.assignment == (0, 2) and sol.cost == -6
    assert solve(Ilp([1, 1], [[1, 2], [3, 1]], [0, 0], [3, 3])).assignment == (0, 0)
    spec = Iqp([[1, 0], [0, 1]], [-3, 0], [[1, 1]], [2], [3, 3])
    sol = solve(spec)
    assert sol.cost == best(spec) == -2 and sol.assignment == (1, 0)


# -- structural invariants ------------------------------------------------------------


def all_specs():
    out = [spec for name in OPTIMIZATION for spec in batch(name, 3, seed=21)]
    out += csp_instances()[:8]
    out += [AdditionInv(5, 2), MultiplicationInv(6, 2, 2), LinearSystem([[1, 1]], [1], [2, 2])]
    out += [ShortestPathCost(3, line_graph(), 0, 2, 3), ShortestPathRoute(3, line_graph(), 0, 2, 3)]
    out += [Tsp([[0, 1, 4, 2], [1, 0, 2, 5], [4, 2, 0, 3], [2, 5, 3, 0]])]
    return out


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.family)
def test_builder_layout_matches_network(spec):
    net, layout = build(spec, 0.5)
    assert isinstance(net, TensorNetwork)
    layout.check(net)
    dims = spec.dims()
    if spec.kind != "readout":
        assert layout.dims[: len(dims)] == dims


@pytest.mark.parametrize("name", sorted(OPTIMIZATION))
def test_partition_function_and_projection_identities(name):
    for spec in batch(name, 4, seed=8):
        tau = 0.5 / cost_scale(spec)
        total = 0.0
        for x in states(spec):
            w = brute_weight(spec, tau, x)
            total += w
            assert closed_value(spec, tau, x) == pytest.approx(w, rel=1e-9, abs=1e-300)
        assert closed_value(spec, tau) == pytest.approx(total, rel=1e-9, abs=1e-300)


def test_cost_scale():
    assert cost_scale(Qubo([[-3, 0], [3, -1]])) == 3
    assert cost_scale(Qubo([[0, 0], [0, 0]])) == 1


# -- counting and repetition layers ------------------------------------------------


def layer_admitted(tensors, dims):
    """Strings passed by an MPO filter: close inputs with plus, read outputs."""
    n = len(tensors)
    nodes = dict(enumerate(tensors))
    bonds, open_legs = [], {}
    for k, t in enumerate(tensors):
        open_legs[f"in{k}"] = (k, 0)
    if n == 1:
        open_legs["out0"] = (0, 1)
    else:
        open_legs["out0"] = (0, 1)
        bonds.append(((0, 2), (1, 1)))
        for k in range(1, n - 1):
            open_legs[f"out{k}"] = (k, 2)
            bonds.append(((k, 3), (k + 1, 1)))
        open_legs[f"out{n - 1}"] = (n - 1, 2)
    net = TensorNetwork(nodes, tuple(bonds), open_legs)
    closed = attach_boundaries(net, {f"in{k}": make_plus(d) for k, d in enumerate(dims)})
    t = contract_value(closed)
    assert all(abs(v - 1) < 1e-12 for v in t.entries.values())
    return set(t.entries)


def test_counting_layer_examples():
    assert len(layer_admitted(build_counting_layer([2, 2, 2], 1, 1), [2] * 3)) == 4
    assert len(layer_admitted(build_repetition_layer([2, 2, 2], 1, 1), [2] * 3)) == 3
    assert layer_admitted(build_repetition_layer([2, 2, 2], 1, 0), [2] * 3) == {(0, 0, 0)}


@pytest.mark.parametrize("n,d,value,limit", [(1, 2, 1, 0), (2, 3, 2, 1), (4, 2, 0, 2), (4, 3, 1, 2), (5, 2, 1, 3)])
def test_layers_against_enumeration(n, d, value, limit):
    import itertools

    strings = list(itertools.product(range(d), repeat=n))
    cap = {s for s in strings if s.count(value) <= limit}
    exact = {s for s in strings if s.count(value) == limit}
    assert layer_admitted(build_counting_layer([d] * n, value, limit), [d] * n) == cap
    assert layer_admitted(build_repetition_layer([d] * n, value, limit), [d] * n) == exact


def test_layers_need_uniform_dims():
    with pytest.raises(ValueError):
        build_counting_layer([2, 3], 1, 1)
    with pytest.raises(ValueError):
        build_repetition_layer([2, 3], 1, 1)


def test_spec_validation():
    with pytest.raises(SpecError):
        Knapsack([-1, 2], [1, 1], [1, 1], 3)
    with pytest.raises(SpecError):
        Partition([])
    with pytest.raises(SpecError):
        Tsp([[0, 1], [1, 0]])
