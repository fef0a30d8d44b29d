"""
`evaluate`: partition, performance and CDFs for a given tilt table, without optimizing
"""
import argparse
import logging
from pathlib import Path
from typing import Optional, Sequence

from commands.common import EXIT_OK, add_config_arguments, guarded, load_scenario, prepare_out_dir, resolve_threads
from services import artifacts
from services.config_io import write_config
from services.network import Evaluation, evaluate_tilts, load_network

logger = logging.getLogger(__name__)

EVALUATION_SUMMARY = "evaluation_summary.yaml"


def run_evaluation(
    config_path: Path,
    tilts_path: Path,
    out_dir: Path,
    overrides: Sequence[str] = (),
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> Evaluation:
    out_dir = prepare_out_dir(out_dir)
    scenario = load_scenario(config_path, overrides, seed)
    write_config(scenario, out_dir / artifacts.RESOLVED_CONFIG)

    network = load_network(scenario, workers=resolve_threads(threads))
    tilts = artifacts.read_tilts(Path(tilts_path), network.n_stations)
    evaluation = evaluate_tilts(network, tilts)

    artifacts.write_evaluation(out_dir, network, evaluation)
    artifacts.write_summary(
        out_dir / EVALUATION_SUMMARY,
        {
            "scenario": scenario.name,
            "alpha": scenario.alpha,
            "tilts": str(tilts_path),
            "phi_dbm": evaluation.phi,
            "mean_ground_rss_dbm": evaluation.means.get("ground"),
            "mean_uav_rss_dbm": evaluation.means.get("uav"),
            **artifacts.tilt_summary(evaluation),
        },
    )
    return evaluation


def cmd_evaluate(
    config_path: Path,
    tilts_path: Path,
    out_dir: Path,
    overrides: Sequence[str] = (),
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> int:
    def body() -> int:
        evaluation = run_evaluation(config_path, tilts_path, out_dir, overrides, threads, seed)
        print(f"phi_dbm {evaluation.phi!r}")
        return EXIT_OK

    return guarded("evaluate", body)


def register(subparsers) -> None:
    parser = subparsers.add_parser("evaluate", help="Evaluate a fixed tilt table (e.g. cross-evaluate another run)")
    add_config_arguments(parser)
    parser.add_argument("--tilts", required=True, type=Path, help="tilts.csv from a previous run")
    parser.add_argument("--out", required=True, type=Path, help="Output directory")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    return cmd_evaluate(args.config, args.tilts, args.out, args.override, args.threads, args.seed)
