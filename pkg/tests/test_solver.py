import math

import numpy as np
import pytest

from tnsolve.network import InfeasibleSignal
from tnsolve.oracle import enumerate_spec, verify
from tnsolve.problems import build, var_label
from tnsolve.problems.specs import Coloring, Hobo, Partition, Qubo, SingleOne
from tnsolve.solver import (
    SolverConfig,
    UnsupportedCount,
    count_amplitude,
    count_solutions,
    default_tau,
    determine_variable,
    minus_vector_value,
    pick,
    solve,
)

from instances import batch


def test_pick_examples():
    assert pick(np.array([1, math.exp(-1)])) == (0, pytest.approx(1 - math.exp(-1)))
    assert pick(np.array([0.5, 0.5])) == (0, 0.0)
    value, margin = pick(np.array([0.2, 1.0, 1.0 - 1e-12]))
    assert value == 1 and margin == pytest.approx(1e-12, abs=1e-15)
    assert pick(np.array([0.0, 3.0]))[0] == 1
    assert pick(np.array([-2.0, 1.0]))[0] == 0
    with pytest.raises(InfeasibleSignal):
        pick(np.zeros(3))


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(tau=0)
    with pytest.raises(ValueError):
        SolverConfig(growth=1.0)
    with pytest.raises(ValueError):
        SolverConfig(layer_limit=-1)
    assert SolverConfig().mode == "plus" and SolverConfig(humbucker=True).mode == "phase"


def test_determine_variable_single():
    net, layout = build(Hobo([((0,), 1)], [2]), 1.0)
    assert determine_variable(net, layout, 0, {})[0] == 0
    # minus vector: Omega = -1 + e^-1 < 0, so the step function gives 0
    assert minus_vector_value(net, layout, 0, {}) == 0


def test_determine_variable_accepts_builder():
    spec = Qubo([[-3, 0], [3, -1]])

    def source(fixed_by_label):
        return build(spec, 2.0)

    assert determine_variable(source, None, 0, {})[0] == 1
    assert determine_variable(source, None, 1, {0: 1})[0] == 0


def test_minus_vector_needs_binary():
    net, layout = build(Hobo([((0,), 1)], [3]), 1.0)
    with pytest.raises(ValueError):
        minus_vector_value(net, layout, 0, {})


@pytest.mark.parametrize("spec", batch("qubo", 10, seed=4), ids=str)
def test_minus_vector_agrees_with_argmax(spec):
    tau = 4.0 / default_tau(spec) ** -1
    net, layout = build(spec, tau)
    fixed = {}
    for k in range(len(spec.dims())):
        value, margin = determine_variable(net, layout, k, fixed)
        if margin > 1e-6:
            assert minus_vector_value(net, layout, k, fixed) == value
        fixed[k] = value


def test_solve_examples():
    assert solve(SingleOne(3)).assignment == (0, 0, 1)
    sol = solve(Qubo([[-3, 0], [3, -1]]))
    assert sol.assignment == (1, 0) and sol.cost == -3 and sol.converged
    sol = solve(Partition([1, 2, 3]))
    assert sol.feasible and verify(Partition([1, 2, 3]), sol.assignment)[0]


def test_solution_fields():
    spec = Qubo([[-3, 0], [3, -1]])
    sol = solve(spec)
    assert len(sol.margins) == 2 and sol.tau_used > 0
    # log amplitude of the last step is -tau * C(x) for the chosen x
    assert sol.log_amplitude == pytest.approx(-sol.tau_used * sol.cost)


def test_no_escalation_keeps_tau():
    sol = solve(Qubo([[-3, 0], [3, -1]]), SolverConfig(tau=0.25, escalate=False))
    assert sol.tau_used == 0.25 and sol.converged


def test_infeasible_solution():
    sol = solve(Partition([1, 2]))
    assert not sol.feasible and sol.assignment == ()


def test_count_examples():
    assert count_solutions(SingleOne(4)) == 4
    assert count_solutions(Coloring(3, [(0, 1), (1, 2), (0, 2)], 3)) == 6
    assert count_solutions(Partition([1, 1])) == 2
    assert count_solutions(Partition([1, 2])) == 0
    assert abs(count_amplitude(SingleOne(5)) - 5) < 1e-6


def test_count_rejects_weighted_families():
    with pytest.raises(UnsupportedCount):
        count_solutions(Qubo([[1]]))
    with pytest.raises(UnsupportedCount):
        count_solutions(Coloring(2, [(0, 1)], 2, minimize_colors=True))


@pytest.mark.parametrize("name", ["qubo", "qudo", "hobo", "knapsack_linear", "ilp", "mis"])
def test_projection_consistency(name):
    for spec in batch(name, 6, seed=9):
        sol = solve(spec)
        if not sol.feasible:
            continue
        n = len(sol.assignment)
        for k in range(1, n):
            again = solve(spec, SolverConfig(tau=sol.tau_used, escalate=False),
                          fixed=dict(enumerate(sol.assignment[:k])))
            assert again.assignment == sol.assignment


@pytest.mark.parametrize("name", ["qubo", "qudo", "tqudo", "hobo", "iqp"])
def test_humbucker_consistency(name):
    for spec in batch(name, 10, seed=12):
        plus = solve(spec)
        phase = solve(spec, SolverConfig(humbucker=True))
        if plus.converged and phase.converged and phase.feasible:
            assert phase.cost == plus.cost


def unique_optimum_qubos(count):
    out = []
    for spec in batch("qubo", 4 * count, seed=30):
        if len(enumerate_spec(spec).argmin) == 1:
            out.append(spec)
        if len(out) == count:
            break
    return out


def test_monotone_step_zero_margin():
    specs = unique_optimum_qubos(20)
    assert len(specs) == 20
    for spec in specs:
        sol = solve(spec)
        assert sol.converged
        tau = sol.tau_used
        margins = []
        for _ in range(4):
            net, layout = build(spec, tau)
            margins.append(determine_variable(net, layout, 0, {})[1])
            tau *= 2
        assert all(b >= a - 1e-12 for a, b in zip(margins, margins[1:]))


@pytest.mark.parametrize("name", ["qubo", "knapsack_nonlinear", "dominating_set", "assignment"])
def test_feasible_solutions_verify(name):
    for spec in batch(name, 10, seed=2):
        sol = solve(spec)
        ok, cost = verify(spec, sol.assignment)
        assert ok == sol.feasible
        assert cost == sol.cost


def test_var_label_format():
    assert var_label(0) == "x0" and var_label(12) == "x12"
