"""Scenario runners, reports and the ``oqs-maps`` CLI."""

from .config import ScenarioConfig, config_from_dict, derive_seed
from .report import ExperimentReport
from .scenarios import (
    run,
    run_counterexample,
    run_discord,
    run_nonlinearity,
    run_pechukas,
    run_sl_orthogonal,
)

__all__ = [
    "ExperimentReport",
    "ScenarioConfig",
    "config_from_dict",
    "derive_seed",
    "run",
    "run_counterexample",
    "run_discord",
    "run_nonlinearity",
    "run_pechukas",
    "run_sl_orthogonal",
]
