"""End-to-end PTAS: guesses, LP sweeps over |E(S')|, coring, rounding, best-of."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import AgentSet, Instance, evaluate
from .estimator import Partition, build_partition, clairvoyant_estimates, oblivious_estimates
from .fractional import CoringResult, fractional_coring, hard_failures, verify_relaxed
from .lp import LpVector, build_lp, solve_lp
from .oracle import BRUTE_FORCE_MAX_N, brute_force_opt, opt_reference
from .params import MIN_PTAS_N, PtasParams, derive_params, repetition_count
from .pseudocore import cheap_set, iterated_pseudo_coring
from .rounding import randomized_round

__all__ = ["DriverConfig", "RunReport", "run_ptas", "repetition_count", "default_e_range"]

FULL_RANGE_MAX_N = 300
STRIDED_POINTS = 2000


@dataclass(frozen=True)
class DriverConfig:
    e_guess_range: Sequence[int] | None = None
    guess_budget: int | None = None
    trials_per_guess: int | None = None
    master_seed: int = 0
    mode: str = "clairvoyant"
    sample_size: int = 6
    noise: float = 0.0
    hidden_set: AgentSet | None = None
    lp_backend: str = "highs"
    threads: int = 1
    gamma: float | None = None
    kappa: float | None = None
    delta: float | None = None
    oracle_max_n: int = BRUTE_FORCE_MAX_N

    def __post_init__(self):
        if self.mode not in ("clairvoyant", "oblivious"):
            raise ValueError(f"mode must be clairvoyant or oblivious, got {self.mode!r}")
        if self.trials_per_guess is not None and self.trials_per_guess < 1:
            raise ValueError("trials_per_guess must be >= 1")
        if self.guess_budget is not None and self.guess_budget < 1:
            raise ValueError("guess_budget must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class RunReport:
    best_set: AgentSet
    best_g: float
    exact: bool
    mode: str
    records: list[dict] = field(default_factory=list)
    baselines: dict[str, float] = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    wall_clock_s: float = 0.0

    def to_dict(self) -> dict:
        return {
            "best_set": list(self.best_set),
            "best_g": self.best_g,
            "exact": self.exact,
            "mode": self.mode,
            "baselines": dict(self.baselines),
            "info": self.info,
            "records": self.records,
            "wall_clock_s": self.wall_clock_s,
        }


def default_e_range(n: int) -> list[int]:
    top = n * (n - 1) // 2
    if n <= FULL_RANGE_MAX_N:
        return list(range(top + 1))
    stride = math.ceil((top + 1) / STRIDED_POINTS)
    return list(range(0, top + 1, stride))


def trial_seed(master_seed: int, guess: int, e_guess: int, trial: int) -> np.random.SeedSequence:
    """Child stream keyed by (guess, E_guess, trial) under the master seed.

    A spawn key keeps the stream apart from ``default_rng(master_seed)``; a
    plain entropy list would not, since trailing zeros are dropped from it.
    """
    return np.random.SeedSequence(master_seed, spawn_key=(guess, e_guess, trial))


def _prefer(a: tuple[float, AgentSet], b: tuple[float, AgentSet]) -> bool:
    """Whether candidate ``a`` beats ``b``: higher g, then smaller, then lexicographic."""
    if a[0] != b[0]:
        return a[0] > b[0]
    return a[1].order_key() < b[1].order_key()


class _Sweep:
    """Optimal LP vectors along increasing E_guess.

    A vector optimal at ``start`` stays optimal for every larger E_guess whose
    edge row it still satisfies, because the feasible regions are nested.  The
    breakpoints are a function of the model alone, so any two requested ranges
    see identical vectors for shared E_guess values.
    """

    def __init__(self, inst: Instance, part0: Partition, params: PtasParams, backend: str):
        self.inst, self.part0, self.params, self.backend = inst, part0, params, backend
        self.segments: list[tuple[int, int, LpVector]] = []
        self.infeasible_from: int | None = None
        self.solves = 0

    def _extend(self) -> None:
        start = self.segments[-1][1] + 1 if self.segments else 0
        model = build_lp(self.inst, self.part0.with_E(start), self.params.epsilon)
        vec = solve_lp(model, self.backend)
        self.solves += 1
        if vec is None:
            self.infeasible_from = start
            return
        A = list(self.part0.A)
        cover = float(np.dot(self.part0.hat_d[A], vec.x[A])) if A else 0.0
        end = max(start, math.floor(cover / (2 * (1 - self.params.epsilon)) + 1e-9))
        end = min(end, self.inst.max_value)
        self.segments.append((start, end, vec))

    def lookup(self, E: int) -> tuple[int, LpVector] | None:
        while True:
            for k, (s, e, vec) in enumerate(self.segments):
                if s <= E <= e:
                    return k, vec
            if self.infeasible_from is not None and E >= self.infeasible_from:
                return None
            if self.segments and self.segments[-1][1] >= self.inst.max_value:
                return None
            self._extend()


def _run_guess(inst, params, config, j, hat, e_values, trials) -> tuple[list[dict], list[tuple[float, AgentSet]]]:
    part0 = build_partition(inst, params, hat, 0)
    sweep = _Sweep(inst, part0, params, config.lp_backend)
    cored: dict[int, CoringResult] = {}
    records, cands = [], []
    for E in e_values:
        rec = {"guess": j, "E_guess": E}
        hit = sweep.lookup(E)
        if hit is None:
            rec["lp_status"] = "infeasible"
            records.append(rec)
            continue
        k, vec = hit
        if k not in cored:
            cored[k] = fractional_coring(vec, inst, part0, params)
        cr = cored[k]
        part = part0.with_E(E)
        report = verify_relaxed(cr, vec, inst, part, params)
        rec.update(
            lp_status="optimal",
            opt_lp=vec.value,
            segment_start=sweep.segments[k][0],
            loop1_removed=len(cr.loop1),
            loop2_removed=len(cr.loop2),
            hard_failures=hard_failures(report),
            unasserted_failures=[
                key for key, v in report.items() if key != "budget" and not v["asserted"] and not v["holds"]
            ],
        )
        outcomes = []
        for t in range(trials):
            S = randomized_round(cr.x_star.x, inst, part, trial_seed(config.master_seed, j, E, t))
            g = evaluate(inst, S).g
            outcomes.append({"seed": [config.master_seed, j, E, t], "g": g, "size": len(S)})
            cands.append((g, S))
        rec["trials"] = outcomes
        records.append(rec)
    return records, cands


def _clean(x: float) -> float | None:
    return None if x == -math.inf else x


def run_ptas(inst: Instance, config: DriverConfig | None = None) -> RunReport:
    config = config or DriverConfig()
    t0 = time.perf_counter()
    if inst.n < MIN_PTAS_N:
        res = brute_force_opt(inst)
        rep = RunReport(res.best_set, res.opt, True, "exact", info={"evaluations": res.evaluations})
        rep.baselines = {"empty": 0.0}
        rep.wall_clock_s = time.perf_counter() - t0
        return rep

    params = derive_params(inst.n, inst.epsilon, gamma=config.gamma, kappa=config.kappa, delta=config.delta)
    trials = config.trials_per_guess or params.repetitions
    e_values = sorted(set(config.e_guess_range)) if config.e_guess_range is not None else default_e_range(inst.n)
    if e_values and not (0 <= e_values[0] and e_values[-1] <= inst.max_value):
        raise ValueError(f"e_guess_range must lie in [0, {inst.max_value}]")

    info: dict = {"params": {"beta": params.beta, "M": params.M, "repetitions": params.repetitions}}
    if config.mode == "clairvoyant":
        if config.hidden_set is not None:
            S_ref, source = config.hidden_set, "given"
        else:
            ref, exact = opt_reference(inst, config.oracle_max_n)
            S_ref, source = ref.best_set, "oracle" if exact else "local_search"
        S_hidden, _ = iterated_pseudo_coring(inst, S_ref, params)
        family = clairvoyant_estimates(inst, S_hidden, params, config.noise)
        info["hidden"] = {
            "source": source,
            "reference_set": list(S_ref),
            "reference_g": _clean(evaluate(inst, S_ref).g),
            "structured_set": list(S_hidden),
            "structured_g": _clean(evaluate(inst, S_hidden).g),
            "edges": int(sum((inst.adj_mask[v] & S_hidden.mask).bit_count() for v in S_hidden) // 2),
        }
    else:
        seed = int(np.random.SeedSequence([config.master_seed, 0xE57]).generate_state(1)[0])
        family = oblivious_estimates(inst, params, config.sample_size, seed)
        info["sampler"] = {"r": config.sample_size, "seed": seed, "samples": list(family.samples)}

    n_guesses = len(family.guesses)
    if config.guess_budget is not None:
        n_guesses = min(n_guesses, config.guess_budget)
    info["guesses"] = n_guesses

    def work(j):
        return _run_guess(inst, params, config, j, family.guesses[j], e_values, trials)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(work, range(n_guesses)))
    else:
        results = [work(j) for j in range(n_guesses)]

    C = cheap_set(inst, params)
    closure = C
    for v in C:
        closure = closure | inst.neighbors(v)
    baselines = {"empty": AgentSet(), "cheap": C, "cheap_closure": closure}
    best = (0.0, AgentSet())
    base_vals = {}
    for name, S in baselines.items():
        g = evaluate(inst, S).g
        base_vals[name] = _clean(g)
        if _prefer((g, S), best):
            best = (g, S)
    records = []
    for recs, cands in results:
        records.extend(recs)
        for c in cands:
            if _prefer(c, best):
                best = c
    for rec in records:
        for t in rec.get("trials", ()):
            t["g"] = _clean(t["g"])
    rep = RunReport(best[1], best[0], False, config.mode, records, base_vals, info)
    rep.wall_clock_s = time.perf_counter() - t0
    return rep
