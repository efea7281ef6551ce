import math

import numpy as np
import pytest

from tnsolve.oracle import BudgetExceeded, OracleError, enumerate_spec, knapsack_dp, verify
from tnsolve.problems.specs import AdditionInv, Knapsack, Mis, Partition, Qubo, SingleOne, Tsp

from instances import OPTIMIZATION, batch, knapsack


def test_enumerate_examples():
    res = enumerate_spec(Qubo([[-3, 0], [3, -1]]))
    assert res.best_cost == -3 and res.argmin == [(1, 0)] and res.evaluations == 4
    res = enumerate_spec(Partition([1, 2]))
    assert not res.is_feasible and res.argmin == [] and res.best_cost is None
    res = enumerate_spec(SingleOne(4))
    assert res.feasible_count == 4
    assert res.feasible == [(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0)]


def test_enumerate_argmin_is_lexicographic():
    res = enumerate_spec(Qubo([[0, 0], [0, 0]]))
    assert res.argmin == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_budget_refusal():
    with pytest.raises(BudgetExceeded):
        enumerate_spec(Qubo([[1] * 12 for _ in range(12)]), limit=2**10)
    assert enumerate_spec(SingleOne(10), limit=2**10).feasible_count == 10


def test_verify_examples():
    assert verify(AdditionInv(3, 2), (1, 0, 0, 1))[0]  # a = 1, b = 2 (bits interleaved)
    assert not verify(AdditionInv(3, 2), (1, 1, 0, 0))[0]
    E = [[0, 1, 2, 3], [1, 0, 1, 2], [2, 1, 0, 1], [3, 2, 1, 0]]
    ok, cost = verify(Tsp(E), (0, 1, 2))
    assert ok and cost == 3 + 1 + 1 + 1
    assert not verify(Tsp(E), (0, 0, 2))[0]
    ok, cost = verify(Knapsack([2, 3], [3, 4], [1, 1], 4), (1, 1))
    assert not ok and cost == math.inf
    assert verify(Knapsack([2, 3], [3, 4], [1, 1], 5), (1, 1)) == (True, -7)


def test_verify_rejects_bad_assignments():
    with pytest.raises(OracleError):
        verify(Mis(3, [(0, 1)]), (0, 1))
    with pytest.raises(OracleError):
        verify(Mis(3, [(0, 1)]), (0, 1, 2))


def test_knapsack_dp_examples():
    assert knapsack_dp(Knapsack([2, 3], [3, 4], [1, 1], 5)).best_cost == -7
    assert knapsack_dp(Knapsack([2, 3], [3, 4], [1, 1], 0)).best_cost == 0
    assert knapsack_dp(Knapsack([1], [1], [3], 2)).best_cost == -2


@pytest.mark.parametrize("variant", ["linear", "nonlinear", "polynomial"])
def test_knapsack_dp_matches_enumeration(variant):
    rng = np.random.default_rng(17)
    for _ in range(40):
        spec = knapsack(rng, variant)
        a, b = knapsack_dp(spec), enumerate_spec(spec)
        assert a.best_cost == b.best_cost
        assert set(a.argmin) <= set(b.argmin)


@pytest.mark.parametrize("name", sorted(OPTIMIZATION))
def test_argmin_members_verify(name):
    for spec in batch(name, 5, seed=6):
        res = enumerate_spec(spec)
        for x in res.argmin:
            ok, cost = verify(spec, x)
            assert ok and cost == res.best_cost
