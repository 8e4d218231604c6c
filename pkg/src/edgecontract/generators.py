"""Seeded instance generators and the ``--gen`` token syntax.

A generator string is a model name followed by ``key=value`` tokens, e.g.::

    planted_dense n=200 k=40 p_in=0.9 p_out=0.05 cost=bimodal(0.001,0.01,0.3) seed=3
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, fields

import numpy as np

from .core import Instance, InstanceError
from .instance_file import load_instance

MODELS = ("gnp", "planted_dense", "complete", "star", "from_file")
COST_MODELS = {"uniform": 1, "identical": 1, "bimodal": 3, "zero": 0}


@dataclass(frozen=True)
class GeneratorSpec:
    """Random graph model plus cost model, all in raw (unscaled) cost units.

    ``uniform(c)`` draws each cost from [0, c]; ``identical(c)`` gives every
    agent c; ``bimodal(lo, hi, frac)`` gives a random ``round(frac * n)`` agents
    cost ``hi`` and the rest ``lo``; ``zero`` makes every agent free.
    """

    model: str = "gnp"
    n: int = 10
    p: float = 0.5
    k: int = 0
    p_in: float = 0.9
    p_out: float = 0.1
    cost: str = "identical(0.01)"
    seed: int = 0
    epsilon: float = 0.04
    path: str | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise InstanceError(f"model: expected one of {', '.join(MODELS)}, got {self.model!r}")
        if self.model == "from_file":
            if not self.path:
                raise InstanceError("path: required for model from_file")
            return
        if not isinstance(self.n, int) or self.n < 2:
            raise InstanceError(f"n: expected integer >= 2, got {self.n!r}")
        for name in ("p", "p_in", "p_out"):
            val = getattr(self, name)
            if not 0 <= val <= 1:
                raise InstanceError(f"{name}: probability must lie in [0, 1], got {val!r}")
        if self.model == "planted_dense" and not 0 <= self.k <= self.n:
            raise InstanceError(f"k: expected 0 <= k <= n={self.n}, got {self.k!r}")
        parse_cost(self.cost)

    def describe(self) -> str:
        if self.model == "from_file":
            return f"from_file path={self.path}"
        keys = {"gnp": ("p",), "planted_dense": ("k", "p_in", "p_out")}.get(self.model, ())
        parts = [self.model, f"n={self.n}"] + [f"{k}={getattr(self, k)}" for k in keys]
        parts += [f"cost={self.cost}", f"seed={self.seed}", f"epsilon={self.epsilon}"]
        return " ".join(parts)


_COST_RE = re.compile(r"^\s*([a-z]+)\s*(?:\(([^)]*)\))?\s*$")


def parse_cost(text: str) -> tuple[str, tuple[float, ...]]:
    m = _COST_RE.match(text)
    if not m or m.group(1) not in COST_MODELS:
        raise InstanceError(f"cost: expected one of uniform(c), identical(c), bimodal(lo,hi,frac), zero; got {text!r}")
    name = m.group(1)
    raw_args = [a for a in (m.group(2) or "").split(",") if a.strip()]
    try:
        args = tuple(float(a) for a in raw_args)
    except ValueError:
        raise InstanceError(f"cost: non-numeric argument in {text!r}") from None
    if len(args) != COST_MODELS[name]:
        raise InstanceError(f"cost: {name} takes {COST_MODELS[name]} argument(s), got {len(args)}")
    if any(a < 0 for a in args):
        raise InstanceError(f"cost: arguments must be nonnegative, got {text!r}")
    if name == "bimodal" and args[2] > 1:
        raise InstanceError(f"cost: bimodal fraction must lie in [0, 1], got {args[2]}")
    return name, args


def _costs(name: str, args: tuple[float, ...], n: int, rng: np.random.Generator) -> list[float]:
    if name == "zero":
        return [0.0] * n
    if name == "identical":
        return [args[0]] * n
    if name == "uniform":
        return rng.uniform(0.0, args[0], size=n).tolist()
    lo, hi, frac = args
    out = np.full(n, lo)
    out[rng.permutation(n)[: round(frac * n)]] = hi
    return out.tolist()


def _bernoulli_edges(prob: np.ndarray, rng: np.random.Generator) -> list[tuple[int, int]]:
    n = prob.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < prob[iu, ju]
    return list(zip(iu[keep].tolist(), ju[keep].tolist()))


def generate(spec: GeneratorSpec) -> Instance:
    if spec.model == "from_file":
        return load_instance(spec.path)
    n = spec.n
    rng = np.random.default_rng(spec.seed)
    if spec.model == "complete":
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    elif spec.model == "star":
        edges = [(0, v) for v in range(1, n)]
    elif spec.model == "gnp":
        edges = _bernoulli_edges(np.full((n, n), spec.p), rng)
    else:
        planted = np.zeros(n, dtype=bool)
        planted[rng.permutation(n)[: spec.k]] = True
        prob = np.where(np.outer(planted, planted), spec.p_in, spec.p_out)
        edges = _bernoulli_edges(prob, rng)
    name, args = parse_cost(spec.cost)
    return Instance(n, tuple(edges), tuple(_costs(name, args, n, rng)), spec.epsilon)


_FIELD_TYPES = {f.name: f.type for f in fields(GeneratorSpec)}


def parse_generator(text: str) -> GeneratorSpec:
    """Parse ``"model key=value ..."`` into a spec; unknown keys are errors."""
    tokens = shlex.split(text)
    if not tokens:
        raise InstanceError("gen: empty generator string")
    kwargs: dict = {"model": tokens[0]}
    for tok in tokens[1:]:
        key, sep, val = tok.partition("=")
        if not sep:
            raise InstanceError(f"gen: expected key=value, got {tok!r}")
        if key not in _FIELD_TYPES or key == "model":
            raise InstanceError(f"{key}: unknown generator field")
        kind = _FIELD_TYPES[key]
        try:
            if kind == "int":
                kwargs[key] = int(val)
            elif kind == "float":
                kwargs[key] = float(val)
            else:
                kwargs[key] = val
        except ValueError:
            raise InstanceError(f"{key}: cannot parse {val!r}") from None
    return GeneratorSpec(**kwargs)
