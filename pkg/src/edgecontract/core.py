"""Instances, agent sets and the contract-level game semantics.

Agents are ``0..n-1``.  The reward of a set ``S`` is ``|E(S)| / C(n, 2)``.
Costs are kept twice: ``raw_cost`` on the reward scale of ``f`` and the
rescaled ``cost = raw_cost * C(n, 2)`` that every algorithm works with.
Equilibrium checks use the raw scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

EXACT_MAX_N = 64


class InstanceError(ValueError):
    """Raised for malformed instances; the message names the offending field."""


@dataclass(frozen=True)
class AgentSet:
    """Immutable subset of agents stored as a bitmask."""

    mask: int = 0

    @classmethod
    def of(cls, members: Iterable[int]) -> "AgentSet":
        m = 0
        for v in members:
            if v < 0:
                raise ValueError(f"negative agent index {v}")
            m |= 1 << int(v)
        return cls(m)

    @classmethod
    def full(cls, n: int) -> "AgentSet":
        return cls((1 << n) - 1)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, (int, np.integer)) and v >= 0 and bool(self.mask >> int(v) & 1)

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __or__(self, other: "AgentSet") -> "AgentSet":
        return AgentSet(self.mask | other.mask)

    def __and__(self, other: "AgentSet") -> "AgentSet":
        return AgentSet(self.mask & other.mask)

    def __sub__(self, other: "AgentSet") -> "AgentSet":
        return AgentSet(self.mask & ~other.mask)

    def __le__(self, other: "AgentSet") -> bool:
        return self.mask & ~other.mask == 0

    def add(self, v: int) -> "AgentSet":
        return AgentSet(self.mask | 1 << v)

    def remove(self, v: int) -> "AgentSet":
        return AgentSet(self.mask & ~(1 << v))

    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def to_bool(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=bool)
        out[list(self)] = True
        return out

    def order_key(self) -> tuple[int, tuple[int, ...]]:
        """Smaller cardinality first, then lexicographic on sorted members."""
        return (len(self), self.members())

    def __repr__(self) -> str:
        return f"AgentSet({list(self)})"


def as_agent_set(S: AgentSet | Iterable[int]) -> AgentSet:
    return S if isinstance(S, AgentSet) else AgentSet.of(S)


def _validate(n, edges, raw_cost, epsilon) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InstanceError(f"n: expected integer >= 2, got {n!r}")
    if len(raw_cost) != n:
        raise InstanceError(f"raw_costs: expected {n} entries, got {len(raw_cost)}")
    for i, c in enumerate(raw_cost):
        if not (isinstance(c, (int, float)) and math.isfinite(c) and c >= 0):
            raise InstanceError(f"raw_costs[{i}]: expected finite nonnegative number, got {c!r}")
    if not (isinstance(epsilon, (int, float)) and 0 < epsilon <= 0.25):
        raise InstanceError(f"epsilon: expected value in (0, 1/4], got {epsilon!r}")
    seen = set()
    for k, e in enumerate(edges):
        if len(e) != 2:
            raise InstanceError(f"edges[{k}]: expected a pair, got {e!r}")
        u, v = e
        if not all(isinstance(x, (int, np.integer)) and not isinstance(x, bool) for x in (u, v)):
            raise InstanceError(f"edges[{k}]: endpoints must be integers, got {e!r}")
        if not (0 <= u < n and 0 <= v < n):
            raise InstanceError(f"edges[{k}]: endpoint out of range [0, {n}), got {e!r}")
        if u == v:
            raise InstanceError(f"edges[{k}]: self-loop on {u}")
        if u > v:
            raise InstanceError(f"edges[{k}]: expected u < v, got {e!r}")
        if (u, v) in seen:
            raise InstanceError(f"edges[{k}]: duplicate edge {e!r}")
        seen.add((u, v))


@dataclass(frozen=True)
class Instance:
    """Undirected graph on ``n`` agents with per-agent costs and accuracy ``epsilon``."""

    n: int
    edges: tuple[tuple[int, int], ...]
    raw_cost: tuple[float, ...]
    epsilon: float
    cost: tuple[float, ...] = field(init=False, repr=False, compare=False)
    adj_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)
    adjacency: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = tuple(sorted((int(u), int(v)) for u, v in self.edges))
        raw = tuple(float(c) for c in self.raw_cost)
        _validate(self.n, edges, raw, self.epsilon)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "raw_cost", raw)
        object.__setattr__(self, "epsilon", float(self.epsilon))
        scale = self.n * (self.n - 1) // 2
        object.__setattr__(self, "cost", tuple(c * scale for c in raw))
        masks = [0] * self.n
        adj = np.zeros((self.n, self.n), dtype=bool)
        for u, v in edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
            adj[u, v] = adj[v, u] = True
        adj.setflags(write=False)
        object.__setattr__(self, "adj_mask", tuple(masks))
        object.__setattr__(self, "adjacency", adj)

    @property
    def max_value(self) -> int:
        """C(n, 2), the normaliser of the reward."""
        return self.n * (self.n - 1) // 2

    @property
    def cost_array(self) -> np.ndarray:
        return np.asarray(self.cost, dtype=float)

    @property
    def all_agents(self) -> AgentSet:
        return AgentSet.full(self.n)

    def neighbors(self, v: int) -> AgentSet:
        return AgentSet(self.adj_mask[v])

    def with_epsilon(self, epsilon: float) -> "Instance":
        return Instance(self.n, self.edges, self.raw_cost, epsilon)


@dataclass(frozen=True)
class Contract:
    """Linear contract: agent ``v`` receives the fraction ``t[v]`` of the reward."""

    t: tuple[float, ...]

    def __post_init__(self):
        if any(not (x >= 0) for x in self.t):
            raise ValueError("contract entries must be nonnegative")

    @property
    def finite(self) -> bool:
        return all(math.isfinite(x) for x in self.t)


@dataclass(frozen=True)
class Evaluation:
    L: float | Fraction
    R: float | Fraction
    g: float | Fraction


def edges_within(inst: Instance, S: AgentSet | Iterable[int]) -> int:
    S = as_agent_set(S)
    m = S.mask
    return sum((inst.adj_mask[v] & m).bit_count() for v in S) // 2


def degree_in(inst: Instance, v: int, S: AgentSet | Iterable[int]) -> int:
    return (inst.adj_mask[v] & as_agent_set(S).mask).bit_count()


def reward(inst: Instance, S: AgentSet | Iterable[int]) -> float:
    return edges_within(inst, S) / inst.max_value


def marginal(inst: Instance, v: int, S: AgentSet | Iterable[int]) -> float:
    """f(v | S∖{v}); for v in S this is f(S) - f(S∖{v})."""
    return degree_in(inst, v, S) / inst.max_value


def _combine(L, R, n_edges):
    if n_edges == 0:
        return 0.0 if isinstance(R, float) else Fraction(0)
    if L == -math.inf:
        return -math.inf
    return L * R


def evaluate(inst: Instance, S: AgentSet | Iterable[int]) -> Evaluation:
    S = as_agent_set(S)
    m = S.mask
    total = 0.0
    degenerate = False
    n_edges2 = 0
    for v in S:
        d = (inst.adj_mask[v] & m).bit_count()
        n_edges2 += d
        c = inst.cost[v]
        if c == 0.0:
            continue
        if d == 0:
            degenerate = True
        else:
            total += c / d
    n_edges = n_edges2 // 2
    L = -math.inf if degenerate else 1.0 - total
    R = n_edges / inst.max_value
    return Evaluation(L, R, _combine(L, R, n_edges))


def evaluate_exact(inst: Instance, S: AgentSet | Iterable[int]) -> Evaluation:
    """Rational-arithmetic twin of :func:`evaluate` (float costs taken exactly)."""
    if inst.n > EXACT_MAX_N:
        raise ValueError(f"exact evaluation supports n <= {EXACT_MAX_N}")
    S = as_agent_set(S)
    m = S.mask
    total = Fraction(0)
    degenerate = False
    n_edges2 = 0
    for v in S:
        d = (inst.adj_mask[v] & m).bit_count()
        n_edges2 += d
        c = Fraction(inst.raw_cost[v]) * inst.max_value
        if c == 0:
            continue
        if d == 0:
            degenerate = True
        else:
            total += c / d
    n_edges = n_edges2 // 2
    L = -math.inf if degenerate else 1 - total
    R = Fraction(n_edges, inst.max_value)
    return Evaluation(L, R, _combine(L, R, n_edges))


def optimal_contract_for(inst: Instance, S: AgentSet | Iterable[int]) -> Contract:
    """Cheapest contract making exactly ``S`` exert effort (``inf`` marks hopeless agents)."""
    S = as_agent_set(S)
    t = [0.0] * inst.n
    for v in S:
        c = inst.cost[v]
        if c == 0.0:
            continue
        d = degree_in(inst, v, S)
        t[v] = c / d if d else math.inf
    return Contract(tuple(t))


def principal_utility(inst: Instance, t: Contract | Sequence[float], S: AgentSet | Iterable[int]) -> float:
    tt = t.t if isinstance(t, Contract) else tuple(t)
    total = 0.0
    for x in tt:
        total += x
    return reward(inst, S) * (1.0 - total)


def is_pure_nash(
    inst: Instance,
    t: Contract | Sequence[float],
    S: AgentSet | Iterable[int],
    tol: float = 1e-12,
) -> bool:
    """Whether no single agent gains by flipping its action under contract ``t``.

    Comparisons allow a relative slack ``tol``: the optimal contract makes every
    member exactly indifferent, which floating point cannot represent.
    """
    tt = t.t if isinstance(t, Contract) else tuple(t)
    S = as_agent_set(S)
    fS = reward(inst, S)
    for i in range(inst.n):
        ti, ci = tt[i], inst.raw_cost[i]
        if i in S:
            stay, leave = fS * ti - ci, reward(inst, S.remove(i)) * ti
            if stay < leave - tol * max(1.0, abs(leave), abs(stay)):
                return False
        else:
            stay, join = fS * ti, reward(inst, S.add(i)) * ti - ci
            if stay < join - tol * max(1.0, abs(join), abs(stay)):
                return False
    return True
