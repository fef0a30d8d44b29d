"""
corridor-tilt: joint vertical-tilt optimization and cell partitioning for
ground users and UAV corridors.

    python main.py preset case_study --out scenario.yaml
    python main.py optimize --config scenario.yaml --out runs/mixed
    python main.py evaluate --config scenario.yaml --tilts runs/mixed/tilts.csv --out runs/check
    python main.py gradcheck --config scenario.yaml --step 1e-4
    python main.py sweep --config scenario.yaml --out runs/sweep
"""
import argparse
import logging
import sys
from typing import List, Optional

import settings
from commands import evaluate, gradcheck, optimize, preset, sweep

logger = logging.getLogger(__name__)

SUBCOMMANDS = (optimize, evaluate, gradcheck, sweep, preset)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corridor-tilt",
        description="Optimize base-station vertical tilts for ground users and UAV corridors",
    )
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: CORRIDOR_TILT_LOG_LEVEL or INFO)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in SUBCOMMANDS:
        module.register(subparsers)
    return parser


def configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=getattr(logging, level or settings.log_level(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
