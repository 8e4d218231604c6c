"""Additive approximation for linear contracts with an edge-count reward."""

from .core import (
    AgentSet,
    Contract,
    Evaluation,
    Instance,
    InstanceError,
    edges_within,
    evaluate,
    evaluate_exact,
    is_pure_nash,
    optimal_contract_for,
    principal_utility,
)
from .driver import DriverConfig, RunReport, run_ptas
from .generators import GeneratorSpec, generate, parse_generator
from .oracle import brute_force_opt
from .params import PtasParams, derive_params, repetition_count

__all__ = [
    "AgentSet", "Contract", "Evaluation", "Instance", "InstanceError", "edges_within", "evaluate",
    "evaluate_exact", "is_pure_nash", "optimal_contract_for", "principal_utility", "DriverConfig",
    "RunReport", "run_ptas", "GeneratorSpec", "generate", "parse_generator", "brute_force_opt",
    "PtasParams", "derive_params", "repetition_count",
]
