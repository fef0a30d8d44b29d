"""
`optimize`: run the alternating tilt optimization and export its result tables
"""
import argparse
import logging
from pathlib import Path
from typing import Optional, Sequence, Tuple

from commands.common import EXIT_CAP, EXIT_OK, add_config_arguments, guarded, load_scenario, prepare_out_dir, resolve_threads
from services import artifacts
from services.config_io import write_config
from services.network import Evaluation, NetworkModel, evaluate_tilts, load_network
from services.tilt_optimizer import THRESHOLD, OptimizationResult, bs_vat

logger = logging.getLogger(__name__)


def run_optimization(
    config_path: Path,
    out_dir: Path,
    overrides: Sequence[str] = (),
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> Tuple[NetworkModel, OptimizationResult, Evaluation]:
    """Optimize and write every artifact; the resolved scenario is written first"""
    out_dir = prepare_out_dir(out_dir)
    scenario = load_scenario(config_path, overrides, seed)
    write_config(scenario, out_dir / artifacts.RESOLVED_CONFIG)

    network = load_network(scenario, workers=resolve_threads(threads))
    result = bs_vat(network)
    evaluation = evaluate_tilts(network, result.tilts)

    artifacts.write_evaluation(out_dir, network, evaluation)
    artifacts.write_convergence(out_dir / artifacts.CONVERGENCE_CSV, result.trace)
    artifacts.write_summary(
        out_dir / artifacts.RUN_SUMMARY,
        {
            "scenario": scenario.name,
            "alpha": scenario.alpha,
            "seed": scenario.optimizer.seed,
            "termination": result.trace.reason,
            "outer_iterations": result.trace.outer_iterations,
            "inner_iterations": result.trace.inner_iterations,
            "initial_phi_dbm": result.trace.initial_phi,
            "final_phi_dbm": result.trace.final_phi,
            **artifacts.tilt_summary(evaluation),
        },
    )
    return network, result, evaluation


def cmd_optimize(
    config_path: Path,
    out_dir: Path,
    overrides: Sequence[str] = (),
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> int:
    """Exit 0 when the outer loop met its threshold, 2 when it hit the cap (results still written)"""

    def body() -> int:
        _, result, _ = run_optimization(config_path, out_dir, overrides, threads, seed)
        print(f"phi_dbm {result.trace.final_phi!r}")
        if result.trace.reason == THRESHOLD:
            logger.info("✅ Converged")
            return EXIT_OK
        logger.warning("⚠️ Stopped at the iteration cap")
        return EXIT_CAP

    return guarded("optimize", body)


def register(subparsers) -> None:
    parser = subparsers.add_parser("optimize", help="Optimize tilts and export tilts, partition, CDFs and convergence trace")
    add_config_arguments(parser)
    parser.add_argument("--out", required=True, type=Path, help="Output directory")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    return cmd_optimize(args.config, args.out, args.override, args.threads, args.seed)
