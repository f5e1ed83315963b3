"""Experiment reports: per-trial records, aggregates and verdicts."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .. import __version__
from ..serialization import dumps
from .config import ScenarioConfig, derive_seed, trial_rng

VERSION = f"oqs_maps {__version__}"


@dataclass
class ExperimentReport:
    scenario: str
    config: dict
    trials: list[dict]
    verdicts: dict[str, bool]
    expected: dict[str, bool]
    observations: dict = field(default_factory=dict)
    witnesses: list[dict] = field(default_factory=list)
    version: str = VERSION
    wall_time: float = 0.0

    @property
    def aggregates(self) -> dict:
        return aggregate(self.trials)

    @property
    def passed(self) -> bool:
        """Every verdict agrees with the expected outcome."""
        return all(self.verdicts.get(k) == v for k, v in self.expected.items())

    def to_dict(self, include_wall_time: bool = True) -> dict:
        d = {
            "scenario": self.scenario,
            "version": self.version,
            "config": self.config,
            "trials": self.trials,
            "aggregates": self.aggregates,
            "verdicts": self.verdicts,
            "expected": self.expected,
            "passed": self.passed,
            "observations": self.observations,
            "witnesses": self.witnesses,
        }
        if include_wall_time:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, include_wall_time: bool = True) -> str:
        return dumps(self.to_dict(include_wall_time))


def aggregate(records: list[dict]) -> dict:
    """min/max/mean of every numeric per-trial field except bookkeeping."""
    out = {}
    if not records:
        return out
    for key, value in records[0].items():
        if key in ("trial", "seed") or isinstance(value, bool) or not isinstance(value, (int, float)):
            continue
        vals = [r[key] for r in records]
        out[key] = {"min": min(vals), "max": max(vals), "mean": math.fsum(vals) / len(vals)}
    return out


def run_trials(cfg: ScenarioConfig, trial: Callable) -> list[dict]:
    """Evaluate ``trial(index, rng)`` for every trial index, serially or on a thread pool.

    Each trial gets its own generator seeded from ``(master_seed, index)``,
    so the ordered result list does not depend on ``cfg.workers``.
    """

    def one(i: int) -> dict:
        rec = {"trial": i, "seed": derive_seed(cfg.master_seed, i)}
        rec.update(trial(i, trial_rng(cfg.master_seed, i)))
        return rec

    if cfg.workers == 1:
        return [one(i) for i in range(cfg.trials)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(one, range(cfg.trials)))
