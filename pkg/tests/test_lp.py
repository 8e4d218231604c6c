import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from edgecontract.core import AgentSet, Instance, edges_within, evaluate
from edgecontract.estimator import build_partition, clairvoyant_estimates
from edgecontract.lp import build_lp, is_feasible_exact, lp_slacks, solve_lp, to_lp_format
from edgecontract.params import derive_params
from edgecontract.pseudocore import iterated_pseudo_coring

from conftest import instances


def clairvoyant_model(inst, S=None, gamma=None, E=None):
    params = derive_params(inst.n, inst.epsilon, gamma=gamma, strict=False)
    S = inst.all_agents if S is None else S
    S_prime, _ = iterated_pseudo_coring(inst, S, params)
    hat = clairvoyant_estimates(inst, S_prime, params).guesses[0]
    E = edges_within(inst, S_prime) if E is None else E
    part = build_partition(inst, params, hat, E)
    return params, S_prime, part, build_lp(inst, part, params.epsilon)


def test_all_cheap_model():
    inst = Instance(4, ((0, 1), (2, 3)), (0.0,) * 4, 0.04)
    params = derive_params(4, 0.04, strict=False)
    part = build_partition(inst, params, np.zeros(4), 0)
    model = build_lp(inst, part)
    assert len(model.row_ids) == 1
    vec = solve_lp(model)
    assert np.all(vec.x == 1) and vec.value == 0
    assert solve_lp(build_lp(inst, part.with_E(1))) is None
    assert solve_lp(build_lp(inst, part.with_E(1)), "exact") is None


def test_edges_row_vacuous_at_zero(k3):
    _, _, part, model = clairvoyant_model(k3, E=0)
    assert model.h[0] == 0.0 and model.row_ids[0] == "lp_intro:edges"


def test_k3_rows_and_value_bound(k3):
    params, S_prime, part, model = clairvoyant_model(k3)
    assert S_prime == k3.all_agents
    assert part.A == k3.all_agents
    assert len(model.row_ids) == 1 + len(part.A) + len(part.B) == 4
    chi = (S_prime | part.C).to_bool(3).astype(int).tolist()
    assert is_feasible_exact(model, chi)
    vec = solve_lp(model)
    L = evaluate(k3, S_prime).L
    assert vec.value <= (1 - L) / (1 - params.epsilon) + 1e-9


@st.composite
def models(draw):
    inst = draw(instances(min_n=4, max_n=8, cost_scale=0.5))
    gamma = draw(st.floats(1e-4, 1.0))
    E = draw(st.integers(0, inst.max_value))
    params = derive_params(inst.n, inst.epsilon, gamma=gamma, strict=False)
    noise = draw(st.floats(-0.04, 0.04))
    hat = clairvoyant_estimates(inst, inst.all_agents, params, noise).guesses[0]
    return build_lp(inst, build_partition(inst, params, hat, E))


@settings(max_examples=40)
@given(models())
def test_highs_matches_exact_simplex(model):
    a = solve_lp(model, "highs")
    b = solve_lp(model, "exact")
    assert (a is None) == (b is None)
    if a is None:
        return
    assert a.value == pytest.approx(b.value, rel=1e-7, abs=1e-9)
    assert is_feasible_exact(model, b.x.tolist()) or min(lp_slacks(model, b.x).values()) >= -1e-12
    slacks = lp_slacks(model, a.x)
    assert min(slacks.values()) >= -1e-7


def test_exact_solution_is_exactly_feasible():
    inst = Instance(5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)), (0.01,) * 5, 0.04)
    _, _, part, model = clairvoyant_model(inst, E=3)
    from fractions import Fraction

    from edgecontract import simplex

    rows = model.exact_rows()
    status, y, value = simplex.solve_box_lp(model.exact_objective(), rows)
    assert status == "optimal"
    for coef, rhs in rows:
        assert sum((a * y[u] for u, a in coef.items()), Fraction(0)) >= rhs


def test_lp_format_export(k3):
    _, _, _, model = clairvoyant_model(k3)
    text = to_lp_format(model)
    assert text.startswith("\\") and "Minimize" in text and text.rstrip().endswith("End")
    assert text.count(">=") == len(model.row_ids)
    assert "edges:" in text and "high_degree_v0:" in text


def test_slack_keys():
    inst = Instance(4, ((0, 1), (1, 2)), (0.0, 0.01, 0.01, 0.01), 0.04)
    _, _, part, model = clairvoyant_model(inst, E=0)
    keys = set(lp_slacks(model, np.ones(4)))
    assert {"lp_intro:edges", "lp_intro:high_degree", "lp_intro:low_degree", "lp_intro:cheap",
            "lp_intro:expensive", "lp_intro:bounds"} == keys


def test_unknown_backend(k3):
    _, _, _, model = clairvoyant_model(k3)
    with pytest.raises(ValueError):
        solve_lp(model, "glpk")


def test_cheap_member_edges_can_break_structured_feasibility():
    """Edges touching cheap members of S' are not credited by the edge row."""
    # star centre 0 is free (cheap); leaves cost something; plus edge 1-2
    edges = ((0, 1), (0, 2), (0, 3), (1, 2))
    inst = Instance(4, edges, (0.0, 0.001, 0.001, 0.001), 0.25)
    params = derive_params(4, 0.25, strict=False)
    S = AgentSet.of([0, 1, 2, 3])
    hat = clairvoyant_estimates(inst, S, params).guesses[0]
    part = build_partition(inst, params, hat, edges_within(inst, S))
    assert 0 in part.C
    model = build_lp(inst, part)
    chi = S.to_bool(4).astype(int).tolist()
    # credited mass sum_A hat_d = 2 + 2 + 1 = 5 < 2 (1 - eps) 4 = 6
    assert not is_feasible_exact(model, chi)
