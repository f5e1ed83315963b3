"""``oqs-maps`` command line entry point.

Exit status: 0 when every verdict matches the expected outcome, 1 when a
verdict disagrees, 2 on usage, configuration or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import OQSError
from ..serialization import load_json
from .config import SCENARIOS, UNITARY_CHOICES, ScenarioConfig, config_from_dict
from .scenarios import run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oqs-maps",
        description="Check dynamical-map claims for initially correlated system-environment states.",
    )
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--p", type=float, help="weight of the discordant block (default 1)")
    parser.add_argument("--n", type=int, help="system dimension minus one (default 1)")
    parser.add_argument("--env-dim", type=int, help="environment dimension (default 2)")
    parser.add_argument("--trials", type=int, help="number of sampled unitaries (default 1000)")
    parser.add_argument("--seed", type=int, help="master seed (default 42)")
    parser.add_argument("--tol-cp", type=float, help="Choi eigenvalue floor (default 1e-10)")
    parser.add_argument("--tol-eq", type=float, help="equality tolerance (default 1e-11)")
    parser.add_argument("--weight", type=float, help="mixture weight for the nonlinearity scenario")
    parser.add_argument("--unitary", choices=UNITARY_CHOICES, help="override the Haar draw")
    parser.add_argument("--workers", type=int, help="threads used for trials (results do not depend on it)")
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--state", help="state JSON file (discord scenario)")
    parser.add_argument("--out", help="write the report here instead of stdout")
    return parser


def make_config(args: argparse.Namespace) -> ScenarioConfig:
    base = load_json(args.config) if args.config else {}
    overrides = {
        "n": args.n,
        "p": args.p,
        "env_dim": args.env_dim,
        "trials": args.trials,
        "master_seed": args.seed,
        "tol_cp": args.tol_cp,
        "tol_eq": args.tol_eq,
        "weight": args.weight,
        "unitary": args.unitary,
        "workers": args.workers,
        "state_path": args.state,
        "output_path": args.out,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    if base.get("spec") and any(overrides[k] is not None for k in ("n", "p", "env_dim")):
        # explicit flags win over a spec embedded in the file
        base["spec"] = {k: v for k, v in base["spec"].items() if k not in ("env_states", "n", "p", "env_dim")}
    return config_from_dict(base, args.scenario)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        report = run(cfg)
    except (OQSError, OSError) as exc:
        print(f"oqs-maps: error: {exc}", file=sys.stderr)
        return 2

    text = report.to_json()
    if cfg.output_path:
        Path(cfg.output_path).write_text(text + "\n")
    else:
        print(text)
    for name, value in report.verdicts.items():
        want = report.expected.get(name)
        status = "ok" if want is None or want == value else "MISMATCH"
        print(f"{name}: {value} [{status}]", file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
