"""
RSS-optimal cell partitioning and the mean-RSS performance function.

Station indices inside arrays are 0-based (station id - 1). Work over grid
points is split into fixed-size chunks and fanned out to a thread pool; the
chunking never depends on the worker count, so every result is bit-identical
for any number of threads.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

import settings
from models import CORRIDOR, GROUND, AntennaPattern, BaseStation, PathlossParams
from services import channel
from services.errors import DegenerateGeometry, DimensionMismatch
from services.regions import KIND_CORRIDOR, KIND_GROUND, Population, QuadratureGrid, require_population

logger = logging.getLogger(__name__)

CHUNK_POINTS = 2048


@dataclass(frozen=True, eq=False)
class Partition:
    assignment: np.ndarray  # 0-based station index per grid point

    def station_ids(self) -> np.ndarray:
        return self.assignment + 1


@dataclass(frozen=True, eq=False)
class RssCdf:
    """Right-continuous step CDF: cdf[k] = P(RSS <= rss[k])"""
    rss: np.ndarray
    cdf: np.ndarray

    def pairs(self) -> List[Tuple[float, float]]:
        return list(zip(self.rss.tolist(), self.cdf.tolist()))


class LinkModel:
    """
    Tilt-independent part of every station-to-point link.

    For station n and point q it provides the elevation angle and the RSS
    without the vertical gain; RSS(q; theta_n) = static + vertical_gain.
    Both N x P tables are cached when they fit the memory budget, otherwise
    each chunk is recomputed on demand.
    """

    def __init__(
        self,
        grid: QuadratureGrid,
        stations: Sequence[BaseStation],
        pattern: AntennaPattern,
        pathloss_ground: Optional[PathlossParams],
        pathloss_uav: Optional[PathlossParams],
        workers: int = 1,
        cache_mb: Optional[int] = None,
    ):
        self.grid = grid
        self.stations = list(stations)
        self.pattern = pattern
        self.workers = max(1, int(workers))
        self.n_stations = len(self.stations)

        self.px = np.array([s.px for s in self.stations], dtype=float)
        self.py = np.array([s.py for s in self.stations], dtype=float)
        self.hb = np.array([s.h_b for s in self.stations], dtype=float)
        self.azimuth = np.array([s.azimuth for s in self.stations], dtype=float)
        self.tx_power = np.array([s.tx_power for s in self.stations], dtype=float)

        self.pl_a = np.zeros(len(grid))
        self.pl_b = np.zeros(len(grid))
        for code, params in ((KIND_GROUND, pathloss_ground), (KIND_CORRIDOR, pathloss_uav)):
            members = grid.kind == code
            if members.any():
                if params is None:
                    raise ValueError(f"Pathloss parameters missing for {CORRIDOR if code == KIND_CORRIDOR else GROUND} points")
                self.pl_a[members] = params.a
                self.pl_b[members] = params.b

        self.chunks = [(start, min(start + CHUNK_POINTS, len(grid))) for start in range(0, len(grid), CHUNK_POINTS)]
        self._elev: Optional[np.ndarray] = None
        self._static: Optional[np.ndarray] = None

        budget_mb = settings.cache_budget_mb() if cache_mb is None else cache_mb
        needed_mb = 2 * 8 * self.n_stations * len(grid) / 2**20
        if needed_mb <= budget_mb:
            self._build_cache()
            logger.info(f"✅ Link cache built: {self.n_stations} stations x {len(grid)} points ({needed_mb:.1f} MB)")
        else:
            logger.info(f"ℹ️ Link cache skipped ({needed_mb:.1f} MB > {budget_mb} MB budget), computing per chunk")

    # ─── link tables ────────────────────────────────────────────────

    def _compute_block(self, start: int, stop: int) -> Tuple[np.ndarray, np.ndarray]:
        g = self.grid
        dx = g.x[None, start:stop] - self.px[:, None]
        dy = g.y[None, start:stop] - self.py[:, None]
        dh = g.h[None, start:stop] - self.hb[:, None]
        elev = channel.elevation_deg(dx, dy, dh)
        offset = channel.azimuth_offset_deg(dx, dy, self.azimuth[:, None])
        h_gain = channel.horizontal_gain_db(self.pattern.phi_3db, offset)
        d3 = channel.distance_3d(dx, dy, dh)
        if np.any(d3 == 0.0):
            station, point = np.argwhere(d3 == 0.0)[0]
            raise DegenerateGeometry(f"grid point {start + point} coincides with station {station + 1}")
        loss = channel.pathloss_db(self.pl_a[None, start:stop], self.pl_b[None, start:stop], d3)
        static = channel.static_rss_db(self.tx_power[:, None], self.pattern.a_max, h_gain, loss)
        return elev, static

    def _build_cache(self) -> None:
        elev = np.empty((self.n_stations, len(self.grid)))
        static = np.empty_like(elev)

        def fill(bounds):
            start, stop = bounds
            elev[:, start:stop], static[:, start:stop] = self._compute_block(start, stop)

        self.map_chunks(fill)
        self._elev, self._static = elev, static

    def block(self, start: int, stop: int) -> Tuple[np.ndarray, np.ndarray]:
        if self._elev is not None:
            return self._elev[:, start:stop], self._static[:, start:stop]
        return self._compute_block(start, stop)

    def map_chunks(self, fn: Callable[[Tuple[int, int]], object]) -> list:
        if self.workers == 1 or len(self.chunks) == 1:
            return [fn(bounds) for bounds in self.chunks]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, self.chunks))

    def assigned_links(self, assignment: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Elevation and static RSS of each point towards its assigned station"""
        elev = np.empty(len(self.grid))
        static = np.empty(len(self.grid))

        def gather(bounds):
            start, stop = bounds
            block_elev, block_static = self.block(start, stop)
            cols = np.arange(stop - start)
            rows = assignment[start:stop]
            elev[start:stop] = block_elev[rows, cols]
            static[start:stop] = block_static[rows, cols]

        self.map_chunks(gather)
        return elev, static

    def rss_block(self, tilts: np.ndarray, start: int, stop: int) -> np.ndarray:
        elev, static = self.block(start, stop)
        return static + channel.vertical_gain_db(self.pattern.theta_3db, tilts[:, None], elev)


def as_tilt_array(tilts, n_stations: int) -> np.ndarray:
    values = np.asarray(tilts, dtype=float)
    if values.shape != (n_stations,):
        raise DimensionMismatch(f"Expected {n_stations} tilts, got shape {values.shape}")
    return values


def best_station(
    point,
    stations: Sequence[BaseStation],
    tilts: Sequence[float],
    pattern: AntennaPattern,
    params_for_tag: Callable[[str], PathlossParams],
) -> Tuple[int, float]:
    """Serving station id and its RSS for one grid point; ties go to the lowest id"""
    if not stations:
        raise ValueError("No stations")
    params = params_for_tag(point.tag)
    best_id, best_rss = 0, -np.inf
    for station, tilt in zip(stations, tilts):
        value = channel.rss(station, tilt, pattern, params, point.loc)
        if value > best_rss:
            best_id, best_rss = station.id, value
    return best_id, best_rss


def compute_partition(link: LinkModel, tilts) -> Tuple[Partition, np.ndarray]:
    """Assign every point to the station with the highest RSS (lowest index on ties)"""
    tilts = as_tilt_array(tilts, link.n_stations)
    assignment = np.empty(len(link.grid), dtype=np.int64)
    best = np.empty(len(link.grid))

    def assign(bounds):
        start, stop = bounds
        values = link.rss_block(tilts, start, stop)
        winners = np.argmax(values, axis=0)
        assignment[start:stop] = winners
        best[start:stop] = values[winners, np.arange(stop - start)]

    link.map_chunks(assign)
    assignment.setflags(write=False)
    return Partition(assignment=assignment), best


def random_partition(n_points: int, n_stations: int, seed: int) -> Partition:
    rng = np.random.Generator(np.random.PCG64(seed))
    assignment = rng.integers(0, n_stations, size=n_points, dtype=np.int64)
    assignment.setflags(write=False)
    return Partition(assignment=assignment)


def rss_field(link: LinkModel, partition: Partition, tilts) -> np.ndarray:
    """RSS of every point from its assigned station"""
    tilts = as_tilt_array(tilts, link.n_stations)
    elev, static = link.assigned_links(partition.assignment)
    return static + channel.vertical_gain_db(link.pattern.theta_3db, tilts[partition.assignment], elev)


def performance(link: LinkModel, partition: Partition, tilts) -> float:
    """Lambda-weighted mean RSS in dBm over the grid"""
    if partition.assignment.shape[0] != len(link.grid):
        raise ValueError("Partition does not match the grid")
    return float(np.sum(link.grid.weight * rss_field(link, partition, tilts)))


def cell_masses(grid: QuadratureGrid, partition: Partition, n_stations: int) -> np.ndarray:
    return np.bincount(partition.assignment, weights=grid.weight, minlength=n_stations)


def rss_cdf(grid: QuadratureGrid, partition: Partition, field: np.ndarray, population: Population) -> RssCdf:
    """Weight-renormalized empirical CDF of the RSS over one population"""
    members = require_population(grid, population)
    values = field[members]
    weights = grid.weight[members]
    order = np.argsort(values, kind="stable")
    values = values[order]
    cumulative = np.cumsum(weights[order]) / np.sum(weights)
    # keep the last entry of each run of equal values
    last = np.append(values[1:] != values[:-1], True)
    return RssCdf(rss=values[last], cdf=cumulative[last])


def population_mean_rss(grid: QuadratureGrid, field: np.ndarray, population: Population) -> float:
    members = require_population(grid, population)
    weights = grid.weight[members]
    return float(np.sum(weights * field[members]) / np.sum(weights))


def count_plateaus(cdf: RssCdf, gap_db: float = 1.0, min_mass: float = 0.01) -> Tuple[int, float]:
    """
    Split the sorted RSS values wherever consecutive values are more than gap_db
    apart; return how many runs carry at least min_mass and their total mass
    """
    if cdf.rss.size == 0:
        return 0, 0.0
    breaks = np.flatnonzero(np.diff(cdf.rss) > gap_db)
    ends = np.append(breaks, cdf.rss.size - 1)
    upper = cdf.cdf[ends]
    masses = np.diff(np.concatenate(([0.0], upper)))
    kept = masses >= min_mass
    return int(np.sum(kept)), float(np.sum(masses[kept]))


def params_lookup(pathloss_ground: Optional[PathlossParams], pathloss_uav: Optional[PathlossParams]) -> Callable[[str], PathlossParams]:
    table: Dict[str, Optional[PathlossParams]] = {"ground": pathloss_ground, "corridor": pathloss_uav}

    def lookup(tag: str) -> PathlossParams:
        params = table["corridor" if tag.startswith("corridor") else "ground"]
        if params is None:
            raise ValueError(f"No pathloss parameters for {tag}")
        return params

    return lookup
