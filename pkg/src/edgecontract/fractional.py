"""Fractional coring of an LP optimum and the relaxed-feasibility report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Instance
from .estimator import Partition
from .lp import SOLVER_TOL, LpVector
from .params import PtasParams


@dataclass(frozen=True)
class Removal:
    agent: int
    value: float  # entry of the input vector before zeroing
    branch: str  # "support" (neighbourhood mass) or "degree"


@dataclass(frozen=True)
class CoringResult:
    x_star: LpVector
    loop1: tuple[int, ...]
    loop1_mass: float
    loop2: tuple[Removal, ...] = field(default=())

    @property
    def loop2_mass(self) -> float:
        return math.fsum(r.value for r in self.loop2)


def fractional_coring(x: LpVector, inst: Instance, partition: Partition, params: PtasParams) -> CoringResult:
    """Zero small A-entries, then peel B-entries lacking support or degree slack.

    Ties in either argmin go to the lowest index; the support branch is tried
    before the degree branch.  Running sums use the input vector's values.
    """
    n, eps = inst.n, params.epsilon
    root = math.sqrt(n)
    x0 = np.asarray(x.x, dtype=float)
    xs = x0.copy()
    A = np.array(list(partition.A), dtype=int)
    B = np.array(list(partition.B), dtype=int)
    loop1 = A[(xs[A] > 0) & (xs[A] <= 1 / root)] if A.size else A
    loop1_mass = math.fsum(x0[loop1])
    xs[loop1] = 0.0

    adj = inst.adjacency
    mass = adj.astype(float) @ xs
    d = partition.d
    kb = params.kappa_bar
    removed: list[Removal] = []
    acc = 0.0
    while B.size:
        supp = B[xs[B] > 0]
        if supp.size == 0:
            break
        v = int(supp[np.argmin(mass[supp])])
        w = int(supp[np.argmin(eps * d[supp] * xs[supp] - acc)])
        if mass[v] < kb:
            u, branch = v, "support"
        elif eps * d[w] * xs[w] - acc - root < 0:
            u, branch = w, "degree"
        else:
            break
        removed.append(Removal(u, float(x0[u]), branch))
        acc += x0[u]
        mass -= adj[:, u] * xs[u]
        xs[u] = 0.0
    value = float(sum(inst.cost[v] / partition.hat_d[v] * xs[v] for v in partition.A))
    return CoringResult(LpVector(xs, value), tuple(int(v) for v in loop1), loop1_mass, tuple(removed))


def _entry(holds: bool, slack: float, asserted: bool) -> dict:
    return {"holds": bool(holds), "slack": float(slack), "asserted": bool(asserted)}


def _min(values) -> float:
    values = list(values)
    return float(min(values)) if values else math.inf


def verify_relaxed(
    x_star: CoringResult,
    x_input: LpVector,
    inst: Instance,
    partition: Partition,
    params: PtasParams,
    tol: float = SOLVER_TOL,
) -> dict:
    """Per-condition report for the cored vector.

    Every condition carries ``holds``, its minimum ``slack`` and whether it is
    ``asserted`` on this run.  The edge-mass and A-degree conditions are only
    asserted when the measured removal stays within the budget the argument
    needs; otherwise they are reported for inspection.
    """
    n, eps = inst.n, params.epsilon
    root = math.sqrt(n)
    p = partition
    xs = x_star.x_star.x
    mass = inst.adjacency.astype(float) @ xs
    A, B, C, D = (list(s) for s in (p.A, p.B, p.C, p.D))
    kb = params.kappa_bar
    rep: dict[str, dict] = {}

    s9 = _min(xs[v] - 1 / root for v in A if xs[v] > 0)
    rep["lp_relax:nonzero_a"] = _entry(s9 >= -tol, s9, True)
    s10 = _min(mass[v] - kb for v in B if xs[v] > 0)
    rep["lp_relax:nonzero"] = _entry(s10 >= -tol * kb, s10, True)
    obj = math.fsum(inst.cost[v] / p.hat_d[v] * xs[v] for v in A)
    s11 = x_input.value - obj
    rep["lp_relax:objective"] = _entry(s11 >= -tol * max(1.0, abs(x_input.value)), s11, True)

    edge_lhs = math.fsum(p.hat_d[v] * xs[v] for v in A)
    edge_rhs = 2 * (1 - eps) ** 2 * p.E_guess
    max_hat = max((p.hat_d[v] for v in A), default=0.0)
    budget12 = p.E_guess == 0 or root * max_hat <= 2 * eps * (1 - eps) * p.E_guess
    s12 = edge_lhs - edge_rhs
    rep["lp_relax:edges"] = _entry(s12 >= -tol * max(1.0, edge_rhs), s12, budget12)

    total_mass = x_star.loop1_mass + x_star.loop2_mass
    log_budget2 = math.log(kb + root) + params.alpha * math.log(math.log(n))
    within_proof = x_star.loop1_mass <= root and (
        x_star.loop2_mass == 0 or math.log(x_star.loop2_mass) <= log_budget2
    )
    min_hat = min((p.hat_d[v] for v in A), default=math.inf)
    budget13 = within_proof and total_mass <= eps * (2 - eps) / (1 + eps) * min_hat
    f13 = (1 - eps) ** 2 / (1 + eps)
    s13 = _min(mass[v] - f13 * p.hat_d[v] for v in A)
    rep["lp_relax:high_degree"] = _entry(s13 >= -tol * n, s13, budget13)

    f14 = (1 - 2 * eps * (1 + eps)) / (1 + eps)
    s14 = _min(mass[v] - f14 * p.d[v] * xs[v] for v in B)
    rep["lp_relax:low_degree"] = _entry(s14 >= -tol * n, s14, True)
    s15 = _min(-abs(xs[v] - 1) for v in C)
    rep["lp_relax:cheap"] = _entry(s15 >= 0, s15, True)
    s16 = _min(-abs(xs[v]) for v in D)
    rep["lp_relax:expensive"] = _entry(s16 >= 0, s16, True)
    s17 = float(min(xs.min(), (1 - xs).min()))
    rep["lp_relax:bounds"] = _entry(s17 >= 0, s17, True)

    rep["fractional_coring:loop1_mass"] = _entry(
        x_star.loop1_mass <= root, root - x_star.loop1_mass, True
    )
    log_base = math.log(kb + root) + math.log(params.delta_bar_eps)
    step = math.log1p(params.delta_bar_eps)
    geo = _min(log_base + j * step - math.log(r.value) for j, r in enumerate(x_star.loop2) if r.value > 0)
    rep["fractional_coring:geometric"] = _entry(geo >= 0, geo, True)
    rep["budget"] = {
        "loop1_mass": x_star.loop1_mass,
        "loop2_mass": x_star.loop2_mass,
        "within_proof_budget": within_proof,
        "edges_budget": bool(budget12),
        "high_degree_budget": bool(budget13),
    }
    return rep


def hard_failures(report: dict) -> list[str]:
    """Names of asserted conditions that fail."""
    return [k for k, v in report.items() if k != "budget" and v["asserted"] and not v["holds"]]
