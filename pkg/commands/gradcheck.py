"""
`gradcheck`: compare the analytic tilt gradient with central differences on random tilts
"""
import argparse
import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from commands.common import EXIT_ERROR, EXIT_OK, add_config_arguments, guarded, load_scenario, resolve_threads
from services.network import load_network
from services.tilt_optimizer import finite_diff_check

logger = logging.getLogger(__name__)

PASS_THRESHOLD = 1e-5
RANDOM_TILT_RANGE = (-30.0, 30.0)


def cmd_gradcheck(
    config_path: Path,
    step_deg: float = 1e-4,
    trials: int = 10,
    overrides: Sequence[str] = (),
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> int:
    """Exit 0 iff the worst relative error over all trials is below 1e-5"""

    def body() -> int:
        scenario = load_scenario(config_path, overrides, seed)
        network = load_network(scenario, workers=resolve_threads(threads))
        rng = np.random.Generator(np.random.PCG64(scenario.optimizer.seed))

        worst = 0.0
        for trial in range(1, trials + 1):
            tilts = rng.uniform(*RANDOM_TILT_RANGE, size=network.n_stations)
            error = finite_diff_check(network.link, tilts, step_deg)
            logger.info(f"📊 Trial {trial}/{trials}: max relative error {error:.3e}")
            worst = max(worst, error)

        print(f"max_relative_error {worst:.9g}")
        if worst < PASS_THRESHOLD:
            logger.info(f"✅ Gradient check passed (step {step_deg} deg)")
            return EXIT_OK
        logger.error(f"❌ Gradient check failed: {worst:.3e} >= {PASS_THRESHOLD}")
        return EXIT_ERROR

    return guarded("gradcheck", body)


def register(subparsers) -> None:
    parser = subparsers.add_parser("gradcheck", help="Validate the analytic gradient against finite differences")
    add_config_arguments(parser)
    parser.add_argument("--step", type=float, default=1e-4, help="Central-difference step in degrees")
    parser.add_argument("--trials", type=int, default=10, help="Number of random tilt vectors")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    return cmd_gradcheck(args.config, args.step, args.trials, args.override, args.threads, args.seed)
