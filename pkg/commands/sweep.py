"""
`sweep`: optimize for several user mixtures, then score every tilt set on the mixed population
"""
import argparse
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from commands.common import EXIT_CAP, EXIT_OK, add_config_arguments, guarded, load_scenario, overrides_with, prepare_out_dir, resolve_threads
from commands.optimize import run_optimization
from services import artifacts
from services.network import evaluate_tilts, load_network
from services.partition import count_plateaus
from services.tilt_optimizer import THRESHOLD

logger = logging.getLogger(__name__)

DEFAULT_ALPHAS = (1.0, 0.0, 0.5)
REFERENCE_ALPHA = 0.5
COVERAGE_SUMMARY = "coverage_summary.csv"


def alpha_dir(out_dir: Path, alpha: float) -> Path:
    return Path(out_dir) / f"alpha_{alpha:g}"


def run_sweep(
    config_path: Path,
    out_dir: Path,
    alphas: Sequence[float] = DEFAULT_ALPHAS,
    overrides: Sequence[str] = (),
    threads: Optional[int] = None,
    seed: Optional[int] = None,
    reference_alpha: float = REFERENCE_ALPHA,
) -> List[Dict]:
    """
    One optimization per alpha under <out>/alpha_<a>/, then every resulting tilt
    set evaluated against the reference mixture. Returns the coverage rows.
    """
    out_dir = prepare_out_dir(out_dir)
    runs = {}
    for alpha in alphas:
        logger.info(f"🔄 Sweep: optimizing for alpha={alpha:g}")
        _, result, _ = run_optimization(
            config_path,
            alpha_dir(out_dir, alpha),
            overrides_with(overrides, f"alpha={alpha!r}"),
            threads,
            seed,
        )
        runs[alpha] = result

    reference = load_scenario(config_path, overrides_with(overrides, f"alpha={reference_alpha!r}"), seed)
    network = load_network(reference, workers=resolve_threads(threads))

    rows = []
    for alpha, result in runs.items():
        evaluation = evaluate_tilts(network, result.tilts)
        summary = artifacts.tilt_summary(evaluation)
        row = {
            "tilts_alpha": alpha,
            "mean_ground_rss_dbm": evaluation.means.get("ground"),
            "mean_uav_rss_dbm": evaluation.means.get("uav"),
            "phi_dbm": evaluation.phi,
            "uptilted_stations": len(summary["uptilted_stations"]),
            "zero_mass_stations": len(summary["zero_mass_stations"]),
            "termination": result.trace.reason,
        }
        if "uav" in evaluation.cdfs:
            row["uav_cdf_plateaus"] = count_plateaus(evaluation.cdfs["uav"])[0]
        rows.append(row)
        logger.info(
            f"📊 Tilts from alpha={alpha:g} on alpha={reference_alpha:g} users: "
            f"ground {row['mean_ground_rss_dbm']}, UAV {row['mean_uav_rss_dbm']}, phi {row['phi_dbm']:.4f} dBm"
        )

    artifacts.write_coverage_summary(out_dir / COVERAGE_SUMMARY, rows)
    return rows


def cmd_sweep(
    config_path: Path,
    out_dir: Path,
    alphas: Sequence[float] = DEFAULT_ALPHAS,
    overrides: Sequence[str] = (),
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> int:
    """Exit 0 when every run met its threshold, 2 when any stopped at the cap"""

    def body() -> int:
        rows = run_sweep(config_path, out_dir, alphas, overrides, threads, seed)
        if all(row["termination"] == THRESHOLD for row in rows):
            return EXIT_OK
        logger.warning("⚠️ At least one sweep run stopped at the iteration cap")
        return EXIT_CAP

    return guarded("sweep", body)


def register(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="Optimize for several alphas and cross-evaluate on the mixed population")
    add_config_arguments(parser)
    parser.add_argument("--out", required=True, type=Path, help="Output directory")
    parser.add_argument(
        "--alphas",
        type=float,
        nargs="+",
        default=list(DEFAULT_ALPHAS),
        help="Ground-user shares to optimize for (default: 1 0 0.5)",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    return cmd_sweep(args.config, args.out, args.alphas, args.override, args.threads, args.seed)
