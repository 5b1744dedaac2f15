"""Command-line front end: run one experiment from a TOML config and
write its CSV and JSON sidecar."""
from __future__ import annotations

import argparse
import sys

from . import harness

_SUBCOMMANDS = {
    "fig7": "fig7_error_vs_snr",
    "fig8": "fig8_gain_vs_snr",
    "fig9": "fig9_gain_vs_L",
    "fig10": "fig10_gain_vs_pt",
    "validate": "validate",
}

_HELP = {
    "fig7": "error probabilities vs SNR at a fixed power split",
    "fig8": "scheduler gains vs transmit SNR",
    "fig9": "scheduler gains vs number of observed samples",
    "fig10": "scheduler gains vs classification error budget",
    "validate": "self-check suite (closed forms, allocator, scheduler)",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noma",
        description="Deterministic sweeps for the blind-classification "
                    "downlink experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, target in _SUBCOMMANDS.items():
        cmd = sub.add_parser(name, help=_HELP[name])
        cmd.add_argument("--config", default=None,
                         help="TOML file with config overrides")
        cmd.add_argument("--seed", type=int, default=None,
                         help="master seed (overrides config)")
        cmd.add_argument("--out", default=".",
                         help="output directory (default: current)")
        cmd.add_argument("--override", action="append", default=[],
                         metavar="KEY=VALUE",
                         help="override one config key; repeatable")
        cmd.set_defaults(experiment=target)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = harness.load_config(args.experiment, args.config,
                                  args.override, args.seed)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return harness.run_experiment(cfg, args.out)


if __name__ == "__main__":
    raise SystemExit(main())
