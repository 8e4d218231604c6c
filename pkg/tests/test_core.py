import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from edgecontract.core import (
    AgentSet,
    Contract,
    Instance,
    InstanceError,
    degree_in,
    edges_within,
    evaluate,
    evaluate_exact,
    is_pure_nash,
    marginal,
    optimal_contract_for,
    principal_utility,
    reward,
)

from conftest import instance_and_set, instances


def test_agent_set_algebra():
    a, b = AgentSet.of([0, 2, 5]), AgentSet.of([2, 3])
    assert list(a | b) == [0, 2, 3, 5]
    assert list(a & b) == [2]
    assert list(a - b) == [0, 5]
    assert AgentSet.of([2]) <= a and not b <= a
    assert len(AgentSet.full(4)) == 4
    assert a.add(1).remove(5).members() == (0, 1, 2)
    assert AgentSet.of([1, 2]).order_key() < AgentSet.of([0, 1, 2]).order_key()
    assert AgentSet.of([0, 3]).order_key() < AgentSet.of([1, 2]).order_key()
    assert a.to_bool(6).tolist() == [True, False, True, False, False, True]


@given(st.sets(st.integers(0, 40)), st.sets(st.integers(0, 40)))
def test_agent_set_matches_python_sets(x, y):
    a, b = AgentSet.of(x), AgentSet.of(y)
    assert set(a | b) == x | y and set(a & b) == x & y and set(a - b) == x - y
    assert (a <= b) == (x <= y)


def test_k3_values(k3):
    ev = evaluate(k3, [0, 1, 2])
    assert ev.R == 1.0
    assert ev.L == pytest.approx(1 - 3 * 0.3 / 2)
    assert ev.g == pytest.approx(0.55)
    assert evaluate(k3, []).g == 0.0


def test_cost_rescaling(p3):
    assert p3.cost == pytest.approx((0.15, 0.15, 0.15))
    assert p3.max_value == 3


def test_isolated_costly_member_gives_minus_infinity(p3):
    ev = evaluate(p3, [0, 1, 2])
    assert ev.g > 0
    assert evaluate(p3, [0, 2]).g == 0.0  # no edges: g is 0 even though L is -inf
    assert evaluate(p3, [0, 2]).L == -math.inf
    assert evaluate(p3, [0, 1, 2]).L > -math.inf
    inst = Instance(4, ((0, 1),), (0.0, 0.0, 0.0, 0.01), 0.04)
    assert evaluate(inst, [0, 1, 3]).g == -math.inf


def test_zero_cost_isolated_member_is_free():
    inst = Instance(3, ((0, 1),), (0.01, 0.01, 0.0), 0.04)
    assert evaluate(inst, [0, 1, 2]).g == evaluate(inst, [0, 1]).g


def test_degrees_and_marginals(star5):
    S = AgentSet.of(range(5))
    assert degree_in(star5, 0, S) == 4
    assert edges_within(star5, S) == 4
    assert marginal(star5, 0, S) == pytest.approx(reward(star5, S) - reward(star5, S.remove(0)))


@given(instance_and_set())
def test_float_matches_exact(case):
    inst, S = case
    ev, ex = evaluate(inst, S), evaluate_exact(inst, S)
    if ex.g == -math.inf:
        assert ev.g == -math.inf
    else:
        assert ev.g == pytest.approx(float(ex.g), rel=1e-12, abs=1e-12)
        assert isinstance(ex.R, Fraction)


@given(instance_and_set())
def test_optimal_contract_is_nash_and_principal_gets_g(case):
    inst, S = case
    t = optimal_contract_for(inst, S)
    if not t.finite:
        return
    g = evaluate(inst, S).g
    assert principal_utility(inst, t, S) == pytest.approx(g, rel=1e-12, abs=1e-15)
    assert is_pure_nash(inst, t, S)


def test_underpaying_breaks_equilibrium(k3):
    t = optimal_contract_for(k3, [0, 1, 2])
    cut = Contract((t.t[0] * 0.9,) + t.t[1:])
    assert not is_pure_nash(k3, cut, [0, 1, 2])


def test_contract_rejects_negative():
    with pytest.raises(ValueError):
        Contract((0.1, -0.1))


@pytest.mark.parametrize(
    "kwargs, field",
    [
        (dict(n=1), "n"),
        (dict(raw_cost=(0.1, 0.1)), "raw_costs"),
        (dict(raw_cost=(0.1, -1.0, 0.1)), "raw_costs[1]"),
        (dict(raw_cost=(0.1, math.nan, 0.1)), "raw_costs[1]"),
        (dict(epsilon=0.3), "epsilon"),
        (dict(epsilon=0.0), "epsilon"),
        (dict(edges=((0, 0),)), "edges[0]"),
        (dict(edges=((0, 3),)), "edges[0]"),
        (dict(edges=((0, 1), (0, 1))), "edges[1]"),
    ],
)
def test_instance_validation_names_field(kwargs, field):
    base = dict(n=3, edges=((0, 1),), raw_cost=(0.1, 0.1, 0.1), epsilon=0.04)
    base.update(kwargs)
    with pytest.raises(InstanceError, match=field.replace("[", r"\[").replace("]", r"\]")):
        Instance(**base)


def test_adjacency_is_read_only(k3):
    with pytest.raises(ValueError):
        k3.adjacency[0, 1] = False
    assert k3.adjacency.sum() == 6 and not np.diag(k3.adjacency).any()


@given(instances(max_n=7))
def test_empty_set_is_zero(inst):
    assert evaluate(inst, []).g == 0.0
