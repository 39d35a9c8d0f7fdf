"""Command line entry point: ``mnnoma {mse,se-vs-snr,se-vs-q,validate}``.

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import experiments
from .experiments import ConfigError, Scenario, write_csv
from .validation import run_validation

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2

# CLI flag -> scenario field
OVERRIDES = {
    "seed": int, "trials": int, "out": str, "user1": int, "user2": int, "profile1": str,
    "profile2": str, "fs": float, "grid_step": float, "guard_band": int, "q_snr_db": float,
    "validate_frames": int,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mnnoma", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("mse", "per-subcarrier MSE and CFR for one channel draw"),
                        ("se-vs-snr", "average spectral efficiency against SNR"),
                        ("se-vs-q", "average spectral efficiency against q at fixed SNR"),
                        ("validate", "closed-form vs independent-route consistency suite")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON scenario file")
        for flag, typ in OVERRIDES.items():
            p.add_argument("--" + flag.replace("_", "-"), dest=flag, type=typ, default=None)
        p.add_argument("--snr-db", type=float, nargs="+", default=None)
        p.add_argument("--q-sweep", type=int, nargs="+", default=None)
        p.add_argument("--sn-oma", action="store_true", default=None)
        p.add_argument("--ideal-oma", action="store_true", default=None)
        p.add_argument("--no-plot", action="store_true")
        if name == "validate":
            p.add_argument("--corrupt-offset", type=int, default=0, help=argparse.SUPPRESS)
    return parser


def load_scenario(args) -> Scenario:
    raw = {}
    if args.config:
        raw = Scenario.from_json(args.config).to_dict()
    for key in list(OVERRIDES) + ["snr_db", "q_sweep", "sn_oma", "ideal_oma"]:
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    return Scenario.from_dict(raw)


def _validate(scenario: Scenario, corrupt_offset: int) -> int:
    checks = run_validation(scenario, corrupt_offset)
    out = Path(scenario.out)
    write_csv(out / "validation.csv", ["check", "value", "tolerance", "passed"],
              [[c.name, float(c.value), float(c.tolerance), bool(c.passed)] for c in checks])
    report = {"passed": all(bool(c.passed) for c in checks),
              "checks": [dict(name=c.name, value=float(c.value), tolerance=float(c.tolerance),
                              passed=bool(c.passed), detail=c.detail) for c in checks]}
    (out / "validation.json").write_text(json.dumps(report, indent=2) + "\n")
    for c in checks:
        print(c.line())
    return EXIT_OK if report["passed"] else EXIT_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        scenario = load_scenario(args)
        plot = not args.no_plot
        if args.command == "mse":
            experiments.run_mse(scenario, plot)
        elif args.command == "se-vs-snr":
            experiments.run_se_vs_snr(scenario, plot)
        elif args.command == "se-vs-q":
            experiments.run_se_vs_q(scenario, plot)
        else:
            return _validate(scenario, args.corrupt_offset)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
