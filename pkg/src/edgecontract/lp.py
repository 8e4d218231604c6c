"""The covering LP over agents: construction, solving, export and slacks.

Rows are kept in ``G x >= h`` form:

* ``lp_intro:edges``        sum_{v in A} hat_d_v x_v >= 2 (1 - eps) E_guess
* ``lp_intro:high_degree``  sum_{u in N(v)} x_u >= hat_d_v / (1 + eps)      for v in A
* ``lp_intro:low_degree``   sum_{u in N(v)} x_u - d_v x_v / (1 + eps) >= 0  for v in B

plus ``x = 1`` on C, ``x = 0`` on D and the unit box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.optimize
import scipy.sparse as sp

from . import simplex
from .core import Instance
from .estimator import Partition

SOLVER_TOL = 1e-9


@dataclass(frozen=True)
class LpModel:
    inst: Instance
    partition: Partition
    epsilon: float
    objective: np.ndarray
    G: sp.csr_matrix
    h: np.ndarray
    row_ids: tuple[str, ...]
    row_agents: tuple[int, ...]  # -1 for the edges row

    @property
    def n(self) -> int:
        return self.inst.n

    def bounds(self) -> list[tuple[float, float]]:
        C, D = self.partition.C, self.partition.D
        return [(1.0, 1.0) if v in C else (0.0, 0.0) if v in D else (0.0, 1.0) for v in range(self.n)]

    def exact_rows(self) -> list[tuple[dict[int, Fraction], Fraction]]:
        """Rows with coefficients formed in rational arithmetic from the float inputs."""
        p, inst = self.partition, self.inst
        fe = Fraction(self.epsilon)
        rows = []
        for rid, v in zip(self.row_ids, self.row_agents):
            if rid == "lp_intro:edges":
                coef = {u: Fraction(float(p.hat_d[u])) for u in p.A}
                rows.append((coef, 2 * (1 - fe) * p.E_guess))
            elif rid == "lp_intro:high_degree":
                coef = {u: Fraction(1) for u in inst.neighbors(v)}
                rows.append((coef, Fraction(float(p.hat_d[v])) / (1 + fe)))
            else:
                coef = {u: Fraction(1) for u in inst.neighbors(v)}
                coef[v] = -Fraction(float(p.d[v])) / (1 + fe)
                rows.append((coef, Fraction(0)))
        return rows

    def exact_objective(self) -> list[Fraction]:
        p = self.partition
        out = [Fraction(0)] * self.n
        for v in p.A:
            out[v] = Fraction(self.inst.cost[v]) / Fraction(float(p.hat_d[v]))
        return out


@dataclass(frozen=True)
class LpVector:
    x: np.ndarray
    value: float


def build_lp(inst: Instance, partition: Partition, epsilon: float | None = None) -> LpModel:
    eps = inst.epsilon if epsilon is None else epsilon
    p = partition
    n = inst.n
    adj = inst.adjacency
    A = list(p.A)
    B = list(p.B)
    objective = np.zeros(n)
    for v in A:
        objective[v] = inst.cost[v] / p.hat_d[v]
    rows = []
    h = []
    ids = []
    agents = []
    edge_row = np.zeros(n)
    edge_row[A] = p.hat_d[A]
    rows.append(edge_row)
    h.append(2 * (1 - eps) * p.E_guess)
    ids.append("lp_intro:edges")
    agents.append(-1)
    for v in A:
        rows.append(adj[v].astype(float))
        h.append(p.hat_d[v] / (1 + eps))
        ids.append("lp_intro:high_degree")
        agents.append(v)
    for v in B:
        row = adj[v].astype(float)
        row[v] = -p.d[v] / (1 + eps)
        rows.append(row)
        h.append(0.0)
        ids.append("lp_intro:low_degree")
        agents.append(v)
    G = sp.csr_matrix(np.vstack(rows))
    return LpModel(inst, p, eps, objective, G, np.asarray(h), tuple(ids), tuple(agents))


def _snap(model: LpModel, x: np.ndarray) -> np.ndarray:
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    x[model.partition.C.to_bool(model.n)] = 1.0
    x[model.partition.D.to_bool(model.n)] = 0.0
    return x


def _solve_highs(model: LpModel) -> LpVector | None:
    res = scipy.optimize.linprog(
        model.objective,
        A_ub=-model.G,
        b_ub=-model.h,
        bounds=model.bounds(),
        method="highs-ds",
        options={"primal_feasibility_tolerance": SOLVER_TOL, "dual_feasibility_tolerance": SOLVER_TOL},
    )
    if res.status == 2:
        return None
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    x = _snap(model, res.x)
    return LpVector(x, float(model.objective @ x))


def _solve_exact(model: LpModel) -> LpVector | None:
    p = model.partition
    free = [v for v in range(model.n) if v not in p.C and v not in p.D]
    pos = {v: j for j, v in enumerate(free)}
    fixed_one = set(p.C)
    rows = []
    for coef, rhs in model.exact_rows():
        shifted = rhs - sum((a for u, a in coef.items() if u in fixed_one), Fraction(0))
        sub = {pos[u]: a for u, a in coef.items() if u in pos and a != 0}
        rows.append((sub, shifted))
    obj = model.exact_objective()
    status, y, _ = simplex.solve_box_lp([obj[v] for v in free], rows)
    if status == "infeasible":
        return None
    x = np.zeros(model.n)
    x[list(fixed_one)] = 1.0
    for v, j in pos.items():
        x[v] = float(y[j])
    exact_value = sum((obj[v] * y[pos[v]] for v in free), Fraction(0)) + sum(
        (obj[v] for v in fixed_one), Fraction(0)
    )
    return LpVector(x, float(exact_value))


def solve_lp(model: LpModel, backend: str = "highs") -> LpVector | None:
    """Optimal vector or ``None`` when infeasible.

    ``backend="exact"`` runs the rational simplex; practical for a few dozen agents.
    """
    if backend == "highs":
        return _solve_highs(model)
    if backend == "exact":
        return _solve_exact(model)
    raise ValueError(f"unknown LP backend {backend!r}")


def is_feasible_exact(model: LpModel, x: Sequence) -> bool:
    """Exact feasibility of a rational (e.g. 0/1) vector against the rational model."""
    xs = [Fraction(v) for v in x]
    p = model.partition
    if any(not 0 <= v <= 1 for v in xs):
        return False
    if any(xs[v] != 1 for v in p.C) or any(xs[v] != 0 for v in p.D):
        return False
    for coef, rhs in model.exact_rows():
        if sum((a * xs[u] for u, a in coef.items()), Fraction(0)) < rhs:
            return False
    return True


def lp_slacks(model: LpModel, x: np.ndarray) -> dict[str, float]:
    """Minimum slack per constraint family (``inf`` for empty families)."""
    x = np.asarray(x, dtype=float)
    lhs = model.G @ x - model.h
    out: dict[str, float] = {}
    for rid in ("lp_intro:edges", "lp_intro:high_degree", "lp_intro:low_degree"):
        mask = np.array([r == rid for r in model.row_ids])
        out[rid] = float(lhs[mask].min()) if mask.any() else math.inf
    p = model.partition
    C, D = list(p.C), list(p.D)
    out["lp_intro:cheap"] = float(-np.abs(x[C] - 1).max()) if C else math.inf
    out["lp_intro:expensive"] = float(-np.abs(x[D]).max()) if D else math.inf
    out["lp_intro:bounds"] = float(min(x.min(), (1 - x).min()))
    return out


def _fmt(a: float) -> str:
    return repr(float(a))


def _terms(coefs: dict[int, float]) -> str:
    parts = []
    for v in sorted(coefs):
        a = coefs[v]
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        parts.append(f"{sign} {_fmt(abs(a))} x{v}")
    if not parts:
        return "0 x0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def to_lp_format(model: LpModel) -> str:
    """CPLEX LP-format text of the model."""
    lines = ["\\ covering LP over agents", "Minimize", " obj: " + _terms(dict(enumerate(model.objective)))]
    lines.append("Subject To")
    G = model.G.tocsr()
    for r, (rid, v) in enumerate(zip(model.row_ids, model.row_agents)):
        row = G.getrow(r)
        coefs = dict(zip(row.indices.tolist(), row.data.tolist()))
        name = rid.split(":", 1)[1] if v < 0 else f"{rid.split(':', 1)[1]}_v{v}"
        lines.append(f" {name}: {_terms(coefs)} >= {_fmt(model.h[r])}")
    lines.append("Bounds")
    for v, (lo, hi) in enumerate(model.bounds()):
        lines.append(f" x{v} = {_fmt(lo)}" if lo == hi else f" {_fmt(lo)} <= x{v} <= {_fmt(hi)}")
    lines.append("End")
    return "\n".join(lines) + "\n"
