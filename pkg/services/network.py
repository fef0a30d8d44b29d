"""
Scenario -> stations, quadrature grid and link tables, plus fixed-tilt evaluation
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from models import BaseStation, ScenarioConfig
from services.deployment import build_stations
from services.errors import EmptyPopulation
from services.partition import (
    LinkModel,
    Partition,
    RssCdf,
    as_tilt_array,
    cell_masses,
    compute_partition,
    performance,
    population_mean_rss,
    rss_cdf,
    rss_field,
)
from services.regions import QuadratureGrid, discretize

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class NetworkModel:
    scenario: ScenarioConfig
    stations: List[BaseStation]
    grid: QuadratureGrid
    link: LinkModel

    @property
    def n_stations(self) -> int:
        return len(self.stations)

    def initial_tilts(self) -> np.ndarray:
        return np.array(self.scenario.initial_tilt_list(), dtype=float)


def load_network(scenario: ScenarioConfig, workers: int = 1, cache_mb: Optional[int] = None) -> NetworkModel:
    logger.info(f"🔄 Building network for scenario '{scenario.name}' (alpha={scenario.alpha})")
    stations = build_stations(scenario)
    grid = discretize(
        scenario.regions,
        scenario.density,
        scenario.grid.resolution_ground,
        scenario.grid.resolution_corridor,
    )
    link = LinkModel(
        grid,
        stations,
        scenario.pattern,
        scenario.pathloss_ground,
        scenario.pathloss_uav,
        workers=workers,
        cache_mb=cache_mb,
    )
    return NetworkModel(scenario=scenario, stations=stations, grid=grid, link=link)


@dataclass(eq=False)
class Evaluation:
    tilts: np.ndarray
    partition: Partition
    rss: np.ndarray
    phi: float
    cell_mass: np.ndarray
    cdfs: Dict[str, RssCdf] = field(default_factory=dict)
    means: Dict[str, float] = field(default_factory=dict)


def evaluate_tilts(network: NetworkModel, tilts) -> Evaluation:
    """Optimal partition, performance, RSS field, CDFs and population means for fixed tilts"""
    tilts = as_tilt_array(tilts, network.n_stations)
    partition, _ = compute_partition(network.link, tilts)
    field_values = rss_field(network.link, partition, tilts)
    phi = performance(network.link, partition, tilts)
    evaluation = Evaluation(
        tilts=tilts,
        partition=partition,
        rss=field_values,
        phi=phi,
        cell_mass=cell_masses(network.grid, partition, network.n_stations),
    )
    for population in ("ground", "uav"):
        try:
            evaluation.cdfs[population] = rss_cdf(network.grid, partition, field_values, population)
            evaluation.means[population] = population_mean_rss(network.grid, field_values, population)
        except EmptyPopulation:
            logger.info(f"ℹ️ No {population} users in this scenario, skipping its CDF")
    logger.info(f"📊 Phi = {phi:.6f} dBm, {int(np.sum(evaluation.cell_mass > 0))}/{network.n_stations} stations serve users")
    return evaluation
