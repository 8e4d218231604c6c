"""Independent rounding of a cored LP vector."""

from __future__ import annotations

import numpy as np

from .core import AgentSet, Instance
from .estimator import Partition


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def randomized_round(x_star: np.ndarray, inst: Instance, partition: Partition, rng_seed) -> AgentSet:
    """Keep each A/B agent with probability ``x_star``; add cheap agents touching the draw.

    One uniform coin per A/B agent in index order.  Cheap agents are tested
    against the A/B draw only, in a single pass.
    """
    x = np.asarray(x_star, dtype=float)
    AB = np.array(sorted(partition.A | partition.B), dtype=int)
    coins = _rng(rng_seed).random(AB.size)
    drawn = AgentSet.of(AB[coins < x[AB]].tolist())
    cheap = [v for v in partition.C if inst.adj_mask[v] & drawn.mask]
    return drawn | AgentSet.of(cheap)


def round_many(x_star: np.ndarray, partition: Partition, seeds) -> np.ndarray:
    """Boolean matrix of the A/B draws for many seeds (rows), columns in index order."""
    x = np.asarray(x_star, dtype=float)
    AB = np.array(sorted(partition.A | partition.B), dtype=int)
    out = np.empty((len(seeds), AB.size), dtype=bool)
    for r, s in enumerate(seeds):
        out[r] = _rng(s).random(AB.size) < x[AB]
    return out
