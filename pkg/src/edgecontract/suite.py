"""The invariant suite on a single instance: structure, LP bound, coring, rounding."""

from __future__ import annotations

import math

from .core import AgentSet, Instance, edges_within, evaluate
from .estimator import build_partition, clairvoyant_estimates, sandwich_holds
from .fractional import fractional_coring, hard_failures, verify_relaxed
from .lp import build_lp, is_feasible_exact, solve_lp
from .oracle import BRUTE_FORCE_MAX_N, opt_reference
from .params import MIN_PTAS_N, PtasParams, derive_params
from .pseudocore import (
    cheap_set,
    chain_report,
    high_degree_report,
    iterated_pseudo_coring,
    monotone_steps,
    switching_report,
    verify_structure,
)
from .rounding import randomized_round
from .driver import trial_seed


def structure_checks(inst: Instance, S_star: AgentSet, params: PtasParams) -> dict:
    """Iterated coring from ``S_star`` with its by-construction and exact-arithmetic checks."""
    C = cheap_set(inst, params)
    S_prime, trace = iterated_pseudo_coring(inst, S_star, params, C)
    starts = [S_star] + trace.sets[:-1]
    worst_step = min(
        (s for k, S0 in enumerate(starts) for s in monotone_steps(inst, S0, trace.removed[k], trace.costs[k], C)),
        default=None,
    )
    switching = switching_report(inst, trace, params, C)
    core = high_degree_report(inst, S_prime, params, C)
    return {
        "S_prime": S_prime,
        "trace": trace,
        "core": core,
        "monotone": {"holds": worst_step is None or worst_step >= 0, "worst": None if worst_step is None else float(worst_step)},
        "switching": switching,
        "switching_ok": all(r["holds"] for r in switching if r["hypothesis"]),
        "switching_unchecked": [r["k"] for r in switching if not r["hypothesis"]],
    }


def lp_bound_check(inst: Instance, S_prime: AgentSet, params: PtasParams, backend: str = "highs") -> dict:
    """Characteristic-vector feasibility of S' ∪ C and the LP value bound at the true edge count."""
    eps = params.epsilon
    family = clairvoyant_estimates(inst, S_prime, params)
    E = edges_within(inst, S_prime)
    part = build_partition(inst, params, family.guesses[0], E)
    model = build_lp(inst, part, eps)
    chi = (S_prime | part.C).to_bool(inst.n).astype(int).tolist()
    feasible = is_feasible_exact(model, chi)
    vec = solve_lp(model, backend)
    L = evaluate(inst, S_prime).L
    bound = (1 - L) / (1 - eps) if math.isfinite(L) else math.inf
    return {
        "E_guess": E,
        "partition": part,
        "model": model,
        "vector": vec,
        "sandwich": sandwich_holds(inst, part, S_prime, params),
        "cheap_in_S_prime": len(S_prime & part.C),
        "feasible": feasible,
        "value": None if vec is None else vec.value,
        "bound": bound,
        "value_ok": vec is not None and vec.value <= bound + 1e-9,
    }


def verify_instance(
    inst: Instance,
    *,
    seed: int = 0,
    gamma: float | None = None,
    trials: int = 8,
    backend: str = "highs",
    oracle_max_n: int = BRUTE_FORCE_MAX_N,
) -> dict:
    """Run every invariant on one instance; ``hard_failures`` lists asserted violations."""
    params = derive_params(inst.n, inst.epsilon, gamma=gamma, strict=inst.n >= MIN_PTAS_N)
    ref, exact = opt_reference(inst, oracle_max_n)
    st = structure_checks(inst, ref.best_set, params)
    S_prime = st["S_prime"]
    lp = lp_bound_check(inst, S_prime, params, backend)
    failures = []
    if not st["core"]["core_ok"]:
        failures.append("pseudocore:core")
    if not st["monotone"]["holds"]:
        failures.append("pseudocore:monotone")
    if not st["switching_ok"]:
        failures.append("pseudocore:switching")
    # Edges touching cheap members of S' are not credited by the edge row.
    lp_asserted = lp["cheap_in_S_prime"] == 0 and lp["sandwich"]
    if lp_asserted and not lp["feasible"]:
        failures.append("lp_bound:feasible")
    if lp_asserted and not lp["value_ok"]:
        failures.append("lp_bound:value")

    relaxed = None
    rounds = []
    if lp["vector"] is not None:
        cr = fractional_coring(lp["vector"], inst, lp["partition"], params)
        relaxed = verify_relaxed(cr, lp["vector"], inst, lp["partition"], params)
        failures.extend(hard_failures(relaxed))
        for t in range(trials):
            S = randomized_round(cr.x_star.x, inst, lp["partition"], trial_seed(seed, 0, lp["E_guess"], t))
            g = evaluate(inst, S).g
            rounds.append({"size": len(S), "g": None if g == -math.inf else g})

    structure = verify_structure(inst, S_prime, params, ref.opt)
    return {
        "n": inst.n,
        "opt": ref.opt,
        "opt_exact": exact,
        "S_star": list(ref.best_set),
        "S_prime": list(S_prime),
        "structure": {k: dict(v) for k, v in structure.items()},
        "chain": chain_report(inst, ref.best_set, S_prime, st["trace"], params),
        "core": st["core"],
        "monotone": st["monotone"],
        "switching": st["switching"],
        "lp_bound": {
            "E_guess": lp["E_guess"],
            "asserted": lp_asserted,
            "feasible": lp["feasible"],
            "value": lp["value"],
            "bound": None if lp["bound"] == math.inf else lp["bound"],
        },
        "relaxed": relaxed,
        "rounding": rounds,
        "hard_failures": failures,
    }
