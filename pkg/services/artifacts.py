"""
Result tables written by the CLI (CSV, 9 significant digits) and run summaries
"""
import logging
import os
from pathlib import Path
from typing import Dict, Iterable, List

import numpy as np
import pandas as pd
import yaml

from services.errors import DimensionMismatch
from services.network import Evaluation, NetworkModel
from services.partition import RssCdf
from services.tilt_optimizer import ConvergenceTrace

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.9g"

RESOLVED_CONFIG = "resolved_config.yaml"
TILTS_CSV = "tilts.csv"
PARTITION_CSV = "partition.csv"
CDF_CSV = {"ground": "cdf_ground.csv", "uav": "cdf_uav.csv"}
CONVERGENCE_CSV = "convergence.csv"
RUN_SUMMARY = "run_summary.yaml"


def _write_csv(frame: pd.DataFrame, path: Path) -> None:
    # write next to the target then rename, so a table is either complete or absent
    tmp = path.with_name(path.name + ".tmp")
    frame.to_csv(tmp, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    os.replace(tmp, path)
    logger.info(f"💾 Wrote {path} ({len(frame)} rows)")


def write_tilts(path: Path, network: NetworkModel, tilts: np.ndarray, cell_mass: np.ndarray) -> None:
    stations = network.stations
    frame = pd.DataFrame(
        {
            "station_id": [s.id for s in stations],
            "x": [s.px for s in stations],
            "y": [s.py for s in stations],
            "azimuth_deg": [s.azimuth for s in stations],
            "tilt_deg": tilts,
            "cell_mass": cell_mass,
            # full precision so that re-evaluating a run reproduces its performance exactly
            "tilt_deg_exact": [repr(float(t)) for t in tilts],
        }
    )
    _write_csv(frame, path)


def read_tilts(path: Path, n_stations: int) -> np.ndarray:
    frame = pd.read_csv(path, float_precision="round_trip")
    if "station_id" not in frame.columns or "tilt_deg" not in frame.columns:
        raise DimensionMismatch(f"{path} needs 'station_id' and 'tilt_deg' columns")
    if len(frame) != n_stations:
        raise DimensionMismatch(f"{path} has {len(frame)} tilts, scenario has {n_stations} stations")
    frame = frame.sort_values("station_id", kind="stable")
    if frame["station_id"].tolist() != list(range(1, n_stations + 1)):
        raise DimensionMismatch(f"{path} station ids must be 1..{n_stations}")
    if "tilt_deg_exact" in frame.columns:
        return frame["tilt_deg_exact"].to_numpy(dtype=float)
    return frame["tilt_deg"].to_numpy(dtype=float)


def write_partition(path: Path, network: NetworkModel, evaluation: Evaluation) -> None:
    grid = network.grid
    frame = pd.DataFrame(
        {
            "x": grid.x,
            "y": grid.y,
            "h": grid.h,
            "region_tag": grid.point_tags(),
            "weight": grid.weight,
            "station_id": evaluation.partition.station_ids(),
            "rss_dbm": evaluation.rss,
        }
    )
    _write_csv(frame, path)


def write_cdf(path: Path, cdf: RssCdf) -> None:
    _write_csv(pd.DataFrame({"rss_dbm": cdf.rss, "cdf": cdf.cdf}), path)


def write_convergence(path: Path, trace: ConvergenceTrace) -> None:
    rows = [{"outer_iter": 0, "phi_dbm": trace.initial_phi, "phi_repartitioned_dbm": np.nan, "inner_iters": 0, "inner_reason": "", "final_eta": np.nan}]
    for record in trace.outer:
        rows.append(
            {
                "outer_iter": record.iteration,
                "phi_dbm": record.phi_new,
                "phi_repartitioned_dbm": record.phi_partitioned,
                "inner_iters": record.inner_iterations,
                "inner_reason": record.inner_reason,
                "final_eta": record.final_eta,
            }
        )
    _write_csv(pd.DataFrame(rows), path)


def write_evaluation(out_dir: Path, network: NetworkModel, evaluation: Evaluation) -> None:
    write_tilts(out_dir / TILTS_CSV, network, evaluation.tilts, evaluation.cell_mass)
    write_partition(out_dir / PARTITION_CSV, network, evaluation)
    for population, filename in CDF_CSV.items():
        if population in evaluation.cdfs:
            write_cdf(out_dir / filename, evaluation.cdfs[population])
        else:
            # header only: the population has no users in this scenario
            logger.warning(f"⚠️ No {population} users, {filename} written without rows")
            _write_csv(pd.DataFrame({"rss_dbm": pd.Series(dtype=float), "cdf": pd.Series(dtype=float)}), out_dir / filename)


def write_summary(path: Path, summary: Dict) -> None:
    path.write_text(yaml.safe_dump(summary, sort_keys=False), encoding="utf-8")
    logger.info(f"💾 Wrote {path}")


def write_coverage_summary(path: Path, rows: Iterable[Dict]) -> None:
    _write_csv(pd.DataFrame(list(rows)), path)


def tilt_summary(evaluation: Evaluation) -> Dict[str, List[int]]:
    served = evaluation.cell_mass > 0.0
    return {
        "uptilted_stations": (np.flatnonzero(served & (evaluation.tilts > 0.0)) + 1).tolist(),
        "downtilted_stations": (np.flatnonzero(served & (evaluation.tilts < 0.0)) + 1).tolist(),
        "zero_mass_stations": (np.flatnonzero(~served) + 1).tolist(),
    }
