"""Pseudo-cores, iterated pseudo-coring and the surrogate objectives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import AgentSet, Instance, as_agent_set, degree_in, evaluate
from .params import PtasParams

_TIE_RTOL = 1e-9


def cheap_set(inst: Instance, params: PtasParams) -> AgentSet:
    """Agents whose original rescaled cost is at most epsilon / (2n)."""
    return AgentSet.of(v for v in range(inst.n) if inst.cost[v] <= params.cheap_threshold)


def _below_beta(d: int, c: float, beta: float) -> bool:
    return Fraction(d * (d + 1)) < Fraction(beta) * Fraction(c)


def peel_pseudo_core(
    inst: Instance,
    S: AgentSet,
    cost_vector: Sequence[float],
    beta: float,
    C: AgentSet,
) -> tuple[AgentSet, list[int]]:
    """Greedy peeling; returns the beta-pseudo-core and the removal order.

    Each step removes the non-cheap member minimising deg(deg+1)/cost while
    that ratio is below ``beta``.  The minimiser and the threshold test are
    decided in exact rational arithmetic on the given floats; ties go to the
    lowest index.
    """
    S = as_agent_set(S)
    n = inst.n
    alive = S.to_bool(n)
    free = alive & ~C.to_bool(n)
    if not free.any():
        return S, []
    cost = np.asarray(cost_vector, dtype=float)
    if np.any(cost[free] <= 0):
        raise ValueError("cost_vector must be positive on S minus C")
    adj = inst.adjacency
    deg = adj[:, alive].sum(axis=1).astype(np.int64)
    removed: list[int] = []
    while free.any():
        idx = np.flatnonzero(free)
        ratio = deg[idx] * (deg[idx] + 1) / cost[idx]
        lo = ratio.min()
        near = idx[ratio <= lo * (1 + _TIE_RTOL)]
        if len(near) > 1:
            i = min(near, key=lambda v: (Fraction(int(deg[v] * (deg[v] + 1))) / Fraction(cost[v]), v))
        else:
            i = int(near[0])
        i = int(i)
        if not _below_beta(int(deg[i]), cost[i], beta):
            break
        alive[i] = free[i] = False
        deg -= adj[:, i]
        removed.append(i)
    return AgentSet.of(np.flatnonzero(alive)), removed


def pseudo_core(inst: Instance, S: AgentSet, cost_vector: Sequence[float], beta: float, C: AgentSet) -> AgentSet:
    return peel_pseudo_core(inst, S, cost_vector, beta, C)[0]


def surrogate_L(
    inst: Instance,
    S: AgentSet,
    cost_vector: Sequence[float],
    C: AgentSet,
    exact: bool = False,
):
    """1 - sum over S minus C of cost / (deg_S + 1)."""
    S = as_agent_set(S)
    total = Fraction(0) if exact else 0.0
    for i in S - C:
        d1 = degree_in(inst, i, S) + 1
        total += Fraction(cost_vector[i]) / d1 if exact else cost_vector[i] / d1
    return 1 - total


@dataclass
class CoringTrace:
    costs: list[tuple[float, ...]] = field(default_factory=list)  # c_{., k}, k = 1..M
    sets: list[AgentSet] = field(default_factory=list)  # S_k, k = 1..M
    values: list[float] = field(default_factory=list)  # L_k(S_k)
    removed: list[list[int]] = field(default_factory=list)  # removal order per iteration
    isolated_cheap: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "iterations": [
                {"k": k + 1, "removed": list(r), "surrogate_L": v, "size": len(s)}
                for k, (r, v, s) in enumerate(zip(self.removed, self.values, self.sets))
            ],
            "isolated_cheap": list(self.isolated_cheap),
        }


def iterated_pseudo_coring(
    inst: Instance,
    S_star: AgentSet,
    params: PtasParams,
    C: AgentSet | None = None,
) -> tuple[AgentSet, CoringTrace]:
    """Alternate cost bumps and pseudo-core peeling, then drop isolated cheap agents."""
    S_star = as_agent_set(S_star)
    C = cheap_set(inst, params) if C is None else C
    trace = CoringTrace()
    costs = list(inst.cost)
    S_prev = S_star
    for k in range(1, params.M + 1):
        if k > 1:
            bump = params.deltas[k - 2]
            for i in S_prev - C:
                costs[i] = costs[i] + bump
        S_k, removed = peel_pseudo_core(inst, S_prev, costs, params.beta, C)
        trace.costs.append(tuple(costs))
        trace.sets.append(S_k)
        trace.removed.append(removed)
        trace.values.append(surrogate_L(inst, S_k, costs, C))
        S_prev = S_k
    isolated = [i for i in S_prev & C if degree_in(inst, i, S_prev) == 0]
    trace.isolated_cheap = isolated
    return S_prev - AgentSet.of(isolated), trace


def verify_structure(inst: Instance, S_prime: AgentSet, params: PtasParams, opt: float) -> dict:
    """Check the three structural properties of a near-optimal set; report only."""
    S_prime = as_agent_set(S_prime)
    eps, n = params.epsilon, inst.n
    g = evaluate(inst, S_prime).g
    high = sum(1 for v in S_prime if degree_in(inst, v, S_prime) >= eps / 6 * n)
    worst = math.inf
    ok3 = True
    for v in S_prime:
        c = inst.cost[v]
        if c <= params.cheap_threshold:
            continue
        d = degree_in(inst, v, S_prime)
        floor_ok = d >= params.degree_floor
        core_ok = not _below_beta(d, c, params.beta)
        ok3 &= floor_ok and core_ok
        worst = min(worst, d * (d + 1) / c - params.beta, d - params.degree_floor)
    return {
        "near_optimal": {"holds": g >= opt - eps, "slack": g - (opt - eps)},
        "dense_part": {"holds": high >= eps / 6 * n, "slack": high - eps / 6 * n},
        "degree_or_cheap": {"holds": ok3, "slack": worst},
    }


def switching_report(inst: Instance, trace: CoringTrace, params: PtasParams, C: AgentSet) -> list[dict]:
    """Per-iteration gap L_k(S_k) - L_{k+1}(S_k) against 2 eps / M.

    The gap bound rests on deg_{S_k}(i) + 1 >= sqrt(beta * Delta_{k-1}) for the
    bumped agents (Delta_0 being the cheap threshold); the flag says whether
    that hypothesis held on this run.
    """
    out = []
    bound = Fraction(2) * Fraction(params.epsilon) / params.M
    for k in range(1, params.M + 1):
        S_k = trace.sets[k - 1]
        c_k = trace.costs[k - 1]
        bump = params.deltas[k - 1]
        c_next = list(c_k)
        for i in S_k - C:
            c_next[i] = c_k[i] + bump
        gap = surrogate_L(inst, S_k, c_k, C, exact=True) - surrogate_L(inst, S_k, c_next, C, exact=True)
        need = math.sqrt(params.beta * params.delta_k(k - 1))
        hyp = all(degree_in(inst, i, S_k) + 1 >= need for i in S_k - C)
        out.append({"k": k, "gap": float(gap), "bound": float(bound), "hypothesis": hyp, "holds": gap <= bound})
    return out


def monotone_steps(
    inst: Instance, S_start: AgentSet, removed: Sequence[int], cost_vector: Sequence[float], C: AgentSet
) -> list[Fraction]:
    """Exact surrogate increments along a recorded removal sequence."""
    S = as_agent_set(S_start)
    prev = surrogate_L(inst, S, cost_vector, C, exact=True)
    steps = []
    for v in removed:
        S = S.remove(v)
        cur = surrogate_L(inst, S, cost_vector, C, exact=True)
        steps.append(cur - prev)
        prev = cur
    return steps


def chain_report(inst: Instance, S_star: AgentSet, S_prime: AgentSet, trace: CoringTrace, params: PtasParams) -> dict:
    """The asymptotic chain conclusions, evaluated as report-only flags."""
    eps = params.epsilon
    L_star = evaluate(inst, S_star).L
    L_prime = evaluate(inst, S_prime).L
    L_M = trace.values[-1]
    return {
        "L_star": L_star,
        "L_prime": L_prime,
        "L_M": L_M,
        "final_vs_prime": L_M <= L_prime + 2 * eps,
        "final_vs_star": L_M <= L_star + 2 * eps,
        "star_vs_prime": L_star <= L_prime + 4 * eps,
    }


def high_degree_report(inst: Instance, S_prime: AgentSet, params: PtasParams, C: AgentSet) -> dict:
    """Pseudo-core condition on original costs plus the lnln degree floor.

    The floor is only implied when it sits below the degree forced by the
    last cost bump; ``floor_asserted`` records whether that is the case.
    """
    S_prime = as_agent_set(S_prime)
    core_ok = True
    floor_ok = True
    for i in S_prime - C:
        d = degree_in(inst, i, S_prime)
        core_ok &= not _below_beta(d, inst.cost[i], params.beta)
        floor_ok &= d >= params.degree_floor
    implied = math.sqrt(params.delta_k(params.M - 1) * params.beta + 0.25) - 0.5
    return {"core_ok": core_ok, "floor_ok": floor_ok, "floor_asserted": params.degree_floor <= implied}
