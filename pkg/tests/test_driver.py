import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from edgecontract.core import AgentSet, Instance, evaluate
from edgecontract.driver import DriverConfig, default_e_range, repetition_count, run_ptas
from edgecontract.generators import GeneratorSpec, generate
from edgecontract.oracle import brute_force_opt
from edgecontract.reports import emit_json, strip_wall_clock

from conftest import complete, instances


def small(model="gnp", n=18, seed=0, **kw):
    kw.setdefault("cost", "uniform(0.002)")
    return generate(GeneratorSpec(model, n=n, p=kw.pop("p", 0.5), seed=seed, **kw))


def test_edgeless():
    rep = run_ptas(Instance(20, (), (0.01,) * 20, 0.04))
    assert rep.best_set == AgentSet() and rep.best_g == 0.0


def test_small_n_routes_to_brute_force(k5_pendants):
    rep = run_ptas(k5_pendants)
    assert rep.exact and rep.mode == "exact"
    assert rep.best_g == brute_force_opt(k5_pendants).opt


def test_complete_graph_reaches_full_set():
    c = 0.0005
    inst = complete(20, c)
    rep = run_ptas(inst)
    g_full = 1 - 20 * c * math.comb(20, 2) / 19
    assert rep.best_g >= g_full - 1e-12
    assert rep.best_g == pytest.approx(brute_force_opt(inst).opt, abs=1e-12)


def candidates(rep):
    gs = [t["g"] for r in rep.records for t in r.get("trials", []) if t["g"] is not None]
    return gs + [g for g in rep.baselines.values() if g is not None]


@settings(max_examples=10)
@given(instances(min_n=16, max_n=20, cost_scale=0.3), st.integers(0, 2**32))
def test_best_is_max_of_candidates(inst, seed):
    rep = run_ptas(inst, DriverConfig(master_seed=seed, trials_per_guess=2))
    assert rep.best_g >= 0
    assert rep.best_g == max(candidates(rep))
    assert evaluate(inst, rep.best_set).g == rep.best_g


def test_nested_ranges_share_vectors_and_grow():
    inst = small(n=20, seed=4)
    full = run_ptas(inst, DriverConfig(master_seed=1))
    part = run_ptas(inst, DriverConfig(master_seed=1, e_guess_range=list(range(40, 90))))
    by_e = {r["E_guess"]: r for r in full.records}
    for r in part.records:
        ref = by_e[r["E_guess"]]
        assert r["lp_status"] == ref["lp_status"]
        if r["lp_status"] == "optimal":
            assert r["opt_lp"] == ref["opt_lp"] and r["trials"] == ref["trials"]
    assert full.best_g >= part.best_g


def test_guess_budget_is_monotone():
    inst = small(n=18, seed=5)
    cfg = dict(mode="oblivious", sample_size=3, master_seed=2, trials_per_guess=1)
    vals = [run_ptas(inst, DriverConfig(guess_budget=b, **cfg)).best_g for b in (1, 3, 8)]
    assert vals == sorted(vals)


def test_deterministic_json():
    inst = small(n=17, seed=6)
    a = strip_wall_clock(json.loads(emit_json(run_ptas(inst, DriverConfig(master_seed=9)).to_dict())))
    b = strip_wall_clock(json.loads(emit_json(run_ptas(inst, DriverConfig(master_seed=9)).to_dict())))
    assert a == b


def test_threads_do_not_change_result():
    inst = small(n=17, seed=7)
    cfg = dict(mode="oblivious", sample_size=2, master_seed=3, trials_per_guess=2)
    one = run_ptas(inst, DriverConfig(threads=1, **cfg)).to_dict()
    four = run_ptas(inst, DriverConfig(threads=4, **cfg)).to_dict()
    assert strip_wall_clock(one) == strip_wall_clock(four)


def test_infeasible_guesses_are_skipped_and_recorded():
    inst = small(n=16, seed=8, p=0.2)
    rep = run_ptas(inst, DriverConfig(e_guess_range=[inst.max_value]))
    assert rep.records[0]["lp_status"] == "infeasible"
    assert rep.best_g >= 0


def test_config_validation():
    with pytest.raises(ValueError):
        DriverConfig(trials_per_guess=0)
    with pytest.raises(ValueError):
        DriverConfig(mode="psychic")
    inst = small(n=16)
    with pytest.raises(ValueError):
        run_ptas(inst, DriverConfig(e_guess_range=[inst.max_value + 1]))


def test_default_range():
    assert default_e_range(20) == list(range(191))
    big = default_e_range(400)
    assert big[0] == 0 and len(big) <= 2000 and big[-1] <= 400 * 399 // 2


def test_repetition_export():
    assert repetition_count(100, 0.04) == 3


def test_seed_recorded_per_trial():
    inst = small(n=16, seed=9)
    rep = run_ptas(inst, DriverConfig(master_seed=77, e_guess_range=[5], trials_per_guess=3))
    rec = rep.records[0]
    assert [t["seed"] for t in rec["trials"]] == [[77, 0, 5, t] for t in range(3)]
