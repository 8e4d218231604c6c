"""Exact and semi-exact references for the maximiser of g."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AgentSet, Instance, as_agent_set, degree_in, evaluate

BRUTE_FORCE_MAX_N = 22
_CHUNK_BITS = 16


class PreconditionError(ValueError):
    """An oracle predicate was called outside its hypotheses."""


@dataclass(frozen=True)
class OracleResult:
    best_set: AgentSet
    opt: float
    evaluations: int


def _subset_values(inst: Instance, ids: np.ndarray):
    n = inst.n
    bits = ((ids[:, None] >> np.arange(n)) & 1).astype(bool)
    X = bits.astype(np.float64)
    deg = X @ inst.adjacency.astype(np.float64)
    cost = inst.cost_array
    n_edges = (X * deg).sum(axis=1) / 2
    costly = bits & (cost > 0)
    degenerate = (costly & (deg == 0)).any(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(costly & (deg > 0), cost / np.where(deg > 0, deg, 1), 0.0)
    L = 1.0 - terms.sum(axis=1)
    g = np.where(degenerate, -np.inf, L * n_edges / inst.max_value)
    g = np.where(n_edges == 0, 0.0, g)
    card = bits.sum(axis=1)
    # lexicographically smallest member tuple == largest bit-reversed mask
    rev = (bits.astype(np.int64) << (n - 1 - np.arange(n))).sum(axis=1)
    return g, card, rev


def brute_force_opt(inst: Instance, max_n: int = BRUTE_FORCE_MAX_N) -> OracleResult:
    """Scan all 2^n subsets.

    Ties go to the smaller set, then to the lexicographically smallest sorted
    member tuple.  ``opt`` is recomputed with :func:`evaluate` on the winner.
    """
    n = inst.n
    if n > max_n:
        raise ValueError(f"brute force limited to n <= {max_n}, got n={n}")
    total = 1 << n
    chunk = 1 << _CHUNK_BITS
    best_key = None
    best_mask = 0
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total), dtype=np.int64)
        g, card, rev = _subset_values(inst, ids)
        top = g.max()
        tied = np.flatnonzero(g == top)
        tied = tied[card[tied] == card[tied].min()]
        k = tied[np.argmax(rev[tied])]
        key = (float(top), -int(card[k]), int(rev[k]))
        if best_key is None or key > best_key:
            best_key, best_mask = key, int(ids[k])
    best = AgentSet(best_mask)
    return OracleResult(best, evaluate(inst, best).g, total)


def extract_kernel(inst: Instance, S: AgentSet) -> AgentSet:
    """Peel agents with at most ``epsilon * n / 3`` neighbours inside the set."""
    threshold = inst.epsilon * inst.n / 3
    W = as_agent_set(S)
    deg = {v: degree_in(inst, v, W) for v in W}
    stack = [v for v, d in deg.items() if d <= threshold]
    while stack:
        v = stack.pop()
        if v not in W:
            continue
        W = W.remove(v)
        for u in inst.neighbors(v) & W:
            deg[u] -= 1
            if deg[u] <= threshold and deg[u] + 1 > threshold:
                stack.append(u)
    return W


def check_cost_budget(inst: Instance, S_star: AgentSet, S: AgentSet) -> bool:
    """Total rescaled cost of a subset of a profitable set is at most n."""
    S_star, S = as_agent_set(S_star), as_agent_set(S)
    if not S <= S_star:
        raise PreconditionError("S must be a subset of S_star")
    if not evaluate(inst, S_star).L > 0:
        raise PreconditionError("requires L(S_star) > 0")
    return sum(inst.cost[v] for v in S) <= inst.n


def _better(inst, a: AgentSet, ga: float, b: AgentSet, gb: float) -> bool:
    if ga != gb:
        return ga > gb
    return a.order_key() < b.order_key()


def local_search_opt(inst: Instance, max_rounds: int = 200) -> OracleResult:
    """Deterministic heuristic reference for n beyond brute force.

    Greedy peeling from the full set followed by single-flip hill climbing.
    Not exact; used only to pick a hidden reference set.
    """
    evaluations = 0
    S = inst.all_agents
    gS = evaluate(inst, S).g
    best, gbest = AgentSet(), 0.0
    if _better(inst, S, gS, best, gbest):
        best, gbest = S, gS
    while S:
        cands = [(evaluate(inst, S.remove(v)).g, S.remove(v)) for v in S]
        evaluations += len(cands)
        gS, S = max(cands, key=lambda p: (p[0], tuple(-x for x in p[1].order_key()[1])))
        if _better(inst, S, gS, best, gbest):
            best, gbest = S, gS
    S, gS = best, gbest
    for _ in range(max_rounds):
        moved = False
        for v in range(inst.n):
            T = S.remove(v) if v in S else S.add(v)
            gT = evaluate(inst, T).g
            evaluations += 1
            if gT > gS + 1e-15:
                S, gS, moved = T, gT, True
        if not moved:
            break
    if _better(inst, S, gS, best, gbest):
        best, gbest = S, gS
    return OracleResult(best, evaluate(inst, best).g if best else 0.0, evaluations)


def opt_reference(inst: Instance, max_n: int = BRUTE_FORCE_MAX_N) -> tuple[OracleResult, bool]:
    """Brute force when affordable, local search otherwise; flag says which."""
    if inst.n <= max_n:
        return brute_force_opt(inst, max_n), True
    return local_search_opt(inst), False


def kernel_report(inst: Instance, S: AgentSet, r_star: float) -> dict:
    """Kernel statistics against the size/degree claims for ``S`` with ``R(S) >= epsilon``."""
    W = extract_kernel(inst, S)
    eps, n = inst.epsilon, inst.n
    ev = evaluate(inst, W)
    min_deg = min((degree_in(inst, v, W) for v in W), default=math.inf)
    return {
        "kernel_size": len(W),
        "size_ok": len(W) >= eps * n / 3,
        "min_degree_ok": min_deg >= eps * n / 3 if W else True,
        "reward_ok": ev.R >= r_star - 2 * eps / 3,
    }
