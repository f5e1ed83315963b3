"""Scenario configuration and seed derivation."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

import numpy as np

from ..errors import ConfigError
from ..serialization import matrix_from_json, matrix_to_json
from ..states import CounterexampleSpec, random_counterexample_spec

SCENARIOS = ("counterexample", "sl-orthogonal", "nonlinearity", "pechukas", "discord")
UNITARY_CHOICES = ("haar", "identity", "swap")

# Disjoint from every trial index, so the setup stream never collides with a trial stream.
_SETUP_KEY = 2**63


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit seed for stream ``index`` (trial number), a pure function of both arguments."""
    ss = np.random.SeedSequence([master_seed % 2**64, index])
    return int(ss.generate_state(1, np.uint64)[0])


def trial_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master_seed, index))


def setup_rng(master_seed: int) -> np.random.Generator:
    """Stream for scenario setup (random environment states)."""
    return trial_rng(master_seed, _SETUP_KEY)


@dataclass
class ScenarioConfig:
    scenario: str
    n: int = 1
    p: float = 1.0
    env_dim: int = 2
    extra_probs: tuple[float, ...] | None = None
    spec: CounterexampleSpec | None = None
    trials: int = 1000
    master_seed: int = 42
    tol_cp: float = 1e-10
    tol_eq: float = 1e-11
    tol_tp: float = 1e-12
    weight: float = 0.6
    unitary: str = "haar"
    state_path: str | None = None
    output_path: str | None = None
    workers: int = field(default=1, metadata={"echo": False})

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if min(self.tol_cp, self.tol_eq, self.tol_tp) <= 0:
            raise ConfigError("tolerances must be positive")
        if self.unitary not in UNITARY_CHOICES:
            raise ConfigError(f"unitary must be one of {UNITARY_CHOICES}")
        if not 0.0 < self.weight < 1.0:
            raise ConfigError("weight must lie in (0, 1)")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.scenario == "discord" and not self.state_path:
            raise ConfigError("the discord scenario needs --state FILE")

    def resolve_spec(self) -> CounterexampleSpec:
        """The explicit spec, or one with random environment states from the setup stream."""
        if self.spec is not None:
            return self.spec
        try:
            return random_counterexample_spec(
                setup_rng(self.master_seed), self.n, self.p, self.env_dim, self.extra_probs
            )
        except ValueError as exc:
            raise ConfigError(f"invalid counterexample spec: {exc}") from exc

    def echo(self) -> dict:
        """Deterministic record of every field that affects results."""
        out = {}
        for f in fields(self):
            if f.metadata.get("echo", True) and f.name != "spec":
                v = getattr(self, f.name)
                out[f.name] = list(v) if isinstance(v, tuple) else v
        if self.scenario not in ("nonlinearity", "discord"):
            out["spec"] = spec_to_json(self.resolve_spec())
        return out

    def with_overrides(self, **kwargs) -> "ScenarioConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def spec_to_json(spec: CounterexampleSpec) -> dict:
    return {
        "n": spec.n,
        "p": spec.p,
        "extra_probs": list(spec.extra_probs),
        "env_dim": spec.env_dim,
        "env_states": [matrix_to_json(m) for m in spec.env_states],
    }


def spec_from_json(d: dict) -> CounterexampleSpec:
    try:
        return CounterexampleSpec(
            int(d["n"]),
            float(d["p"]),
            tuple(d.get("extra_probs", ())),
            int(d["env_dim"]),
            tuple(matrix_from_json(m) for m in d["env_states"]),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed spec object: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"invalid counterexample spec: {exc}") from exc


def config_from_dict(d: dict, scenario: str | None = None) -> ScenarioConfig:
    """Build a config from the JSON mirror of ``ScenarioConfig``.

    ``spec`` may hold either a full spec (with ``env_states``) or just
    ``n``/``p``/``env_dim``/``extra_probs``.
    """
    d = dict(d)
    if scenario is not None:
        d["scenario"] = scenario
    if "scenario" not in d:
        raise ConfigError("config needs a scenario")
    known = {f.name for f in fields(ScenarioConfig)}
    spec = d.pop("spec", None)
    if spec is not None:
        if "env_states" in spec:
            d["spec"] = spec_from_json(spec)
        else:
            for key in ("n", "p", "env_dim", "extra_probs"):
                if key in spec:
                    d[key] = spec[key]
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if d.get("extra_probs") is not None:
        d["extra_probs"] = tuple(d["extra_probs"])
    try:
        return ScenarioConfig(**d)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
