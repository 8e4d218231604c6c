"""JSON instance files: ``{"n", "edges", "raw_costs", "epsilon"}``."""

from __future__ import annotations

import json
from pathlib import Path

from .core import Instance, InstanceError

REQUIRED_KEYS = ("n", "edges", "raw_costs", "epsilon")


def instance_to_dict(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "edges": [list(e) for e in inst.edges],
        "raw_costs": list(inst.raw_cost),
        "epsilon": inst.epsilon,
    }


def instance_from_dict(data: object) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError(f"top level: expected a JSON object, got {type(data).__name__}")
    for key in REQUIRED_KEYS:
        if key not in data:
            raise InstanceError(f"{key}: missing required field")
    extra = set(data) - set(REQUIRED_KEYS)
    if extra:
        raise InstanceError(f"{sorted(extra)[0]}: unknown field")
    if not isinstance(data["edges"], list):
        raise InstanceError("edges: expected a list of [u, v] pairs")
    if not isinstance(data["raw_costs"], list):
        raise InstanceError("raw_costs: expected a list of numbers")
    for k, e in enumerate(data["edges"]):
        if not isinstance(e, list):
            raise InstanceError(f"edges[{k}]: expected [u, v], got {e!r}")
    return Instance(data["n"], tuple(tuple(e) for e in data["edges"]), tuple(data["raw_costs"]), data["epsilon"])


def loads_instance(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return instance_from_dict(data)


def load_instance(path: str | Path) -> Instance:
    path = Path(path)
    try:
        return loads_instance(path.read_text(encoding="utf-8"))
    except InstanceError as exc:
        raise InstanceError(f"{path}: {exc}") from exc


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst))


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(inst) + "\n", encoding="utf-8")
