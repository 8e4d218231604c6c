"""Degree estimates for the hidden structured set and the A/B/C/D partition."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .core import AgentSet, Instance, as_agent_set
from .params import PtasParams
from .pseudocore import cheap_set

SAMPLE_CAP = 18


class ObliviousGuesses(Sequence):
    """The 2^r guesses of a sample-and-enumerate sampler, built on demand.

    Bit ``b`` of the guess index says whether sample ``b`` is taken to lie in
    the hidden set.
    """

    def __init__(self, inst: Instance, samples: np.ndarray):
        self.n = inst.n
        self.samples = samples
        self._cols = inst.adjacency[:, samples].astype(np.float64)

    def __len__(self) -> int:
        return 1 << len(self.samples)

    def __getitem__(self, j):
        if isinstance(j, slice):
            return [self[k] for k in range(*j.indices(len(self)))]
        r = len(self.samples)
        if not 0 <= j < len(self):
            raise IndexError(j)
        if r == 0:
            return np.zeros(self.n)
        marked = ((j >> np.arange(r)) & 1).astype(np.float64)
        return (self.n / r) * (self._cols @ marked)


@dataclass(frozen=True)
class EstimateFamily:
    guesses: Sequence[np.ndarray]
    mode: str
    samples: tuple[int, ...] = ()


def _clamp_exact(value: float, lo: Fraction, hi: Fraction) -> float:
    x = value
    while Fraction(x) > hi:
        x = float(np.nextafter(x, -math.inf))
    while Fraction(x) < lo:
        x = float(np.nextafter(x, math.inf))
    return x


def clairvoyant_estimates(inst: Instance, S_hidden: AgentSet, params: PtasParams, noise: float = 0.0) -> EstimateFamily:
    """Single guess ``(1 + noise) * deg_hidden``, kept inside the ±epsilon band exactly."""
    eps = params.epsilon
    if abs(noise) > eps:
        raise ValueError(f"|noise| must be <= epsilon={eps}, got {noise}")
    S_hidden = as_agent_set(S_hidden)
    deg = inst.adjacency[:, S_hidden.to_bool(inst.n)].sum(axis=1)
    fe = Fraction(eps)
    out = np.empty(inst.n)
    for v in range(inst.n):
        d = int(deg[v])
        out[v] = _clamp_exact((1 + noise) * d, (1 - fe) * d, (1 + fe) * d)
    return EstimateFamily([out], "clairvoyant")


def oblivious_estimates(
    inst: Instance, params: PtasParams, r: int, rng_seed: int, sample_cap: int = SAMPLE_CAP
) -> EstimateFamily:
    """Draw ``r`` agents uniformly with replacement and enumerate all 2^r in/out guesses."""
    if not 0 <= r <= sample_cap:
        raise ValueError(f"sample size r must lie in [0, {sample_cap}], got {r}")
    rng = np.random.default_rng(rng_seed)
    samples = rng.integers(0, inst.n, size=r)
    return EstimateFamily(ObliviousGuesses(inst, samples), "oblivious", tuple(int(s) for s in samples))


@dataclass(frozen=True)
class Partition:
    A: AgentSet
    B: AgentSet
    C: AgentSet
    D: AgentSet
    H: AgentSet
    d: np.ndarray  # nan on C
    hat_d: np.ndarray  # nan outside H
    E_guess: int

    def with_E(self, E_guess: int) -> "Partition":
        return replace(self, E_guess=E_guess)

    def label(self, v: int) -> str:
        for name in "ABCD":
            if v in getattr(self, name):
                return name
        raise AssertionError(f"agent {v} unassigned")


def degree_bound(inst: Instance, params: PtasParams, v: int) -> float:
    """Lower bound d_v on the hidden degree of a non-cheap agent."""
    c = inst.cost[v]
    return max(params.degree_floor, math.sqrt(c * params.beta + 0.25) - 0.5)


def build_partition(inst: Instance, params: PtasParams, hat: Sequence[float], E_guess: int) -> Partition:
    n, eps, sigma = inst.n, params.epsilon, params.sigma
    if not 0 <= E_guess <= inst.max_value:
        raise ValueError(f"E_guess must lie in [0, {inst.max_value}], got {E_guess}")
    hat = np.asarray(hat, dtype=float)
    if hat.shape != (n,) or np.any(hat < 0):
        raise ValueError("estimate vector must be nonnegative with one entry per agent")
    C = cheap_set(inst, params)
    d = np.full(n, np.nan)
    hat_d = np.full(n, np.nan)
    A, B, D, H = [], [], [], []
    for v in range(n):
        if v in C:
            continue
        d[v] = degree_bound(inst, params, v)
        if hat[v] >= sigma * n * (1 - eps):
            H.append(v)
            hat_d[v] = hat[v]
            (A if hat[v] / (1 - eps) >= d[v] else D).append(v)
        elif d[v] >= sigma * n:
            D.append(v)
        else:
            B.append(v)
    return Partition(AgentSet.of(A), AgentSet.of(B), C, AgentSet.of(D), AgentSet.of(H), d, hat_d, int(E_guess))


def sandwich_holds(inst: Instance, partition: Partition, S_prime: AgentSet, params: PtasParams) -> bool:
    """H contains every non-cheap high-degree member and only plausible agents."""
    S_prime = as_agent_set(S_prime)
    eps, sigma, n = params.epsilon, params.sigma, inst.n
    deg = inst.adjacency[:, S_prime.to_bool(n)].sum(axis=1)
    must = {v for v in S_prime - partition.C if deg[v] >= sigma * n}
    may = {v for v in range(n) if v not in partition.C and deg[v] >= (1 - eps) * sigma * n / (1 + eps)}
    H = set(partition.H)
    return must <= H <= may
