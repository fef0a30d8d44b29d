"""
User regions, the ground/UAV mixture density and the quadrature grid
used to integrate over them
"""
import logging
from dataclasses import dataclass
from typing import List, Literal, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from models import CORRIDOR, GROUND, Location, MixtureDensity, RectRegion
from services.errors import EmptyPopulation, EmptyRegion, InvalidMixture

logger = logging.getLogger(__name__)

Population = Literal["ground", "uav", "all"]
POPULATIONS: Tuple[str, ...] = ("ground", "uav", "all")

KIND_GROUND = 0
KIND_CORRIDOR = 1


class GridPoint(NamedTuple):
    loc: Location
    weight: float
    tag: str


def region_tags(regions: Sequence[RectRegion]) -> List[str]:
    """'ground' or 'corridor_<u>' with corridors numbered from 1 in declaration order"""
    tags = []
    u = 0
    for region in regions:
        if region.kind == CORRIDOR:
            u += 1
            tags.append(f"corridor_{u}")
        else:
            tags.append(GROUND)
    return tags


def corridor_index(tag: str) -> Optional[int]:
    if tag.startswith("corridor_"):
        return int(tag.split("_", 1)[1])
    return None


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """
    Midpoint-rule nodes over the user regions.
    Arrays are read-only and indexed by point; `region` indexes `tags`.
    """
    x: np.ndarray
    y: np.ndarray
    h: np.ndarray
    weight: np.ndarray
    kind: np.ndarray
    region: np.ndarray
    tags: Tuple[str, ...]
    resolution_ground: float
    resolution_corridor: float

    def __len__(self) -> int:
        return int(self.x.shape[0])

    def point(self, i: int) -> GridPoint:
        loc = Location(qx=float(self.x[i]), qy=float(self.y[i]), h=float(self.h[i]))
        return GridPoint(loc=loc, weight=float(self.weight[i]), tag=self.tags[int(self.region[i])])

    def point_tags(self) -> np.ndarray:
        return np.asarray(self.tags, dtype=object)[self.region]

    def mask(self, population: Population) -> np.ndarray:
        if population not in POPULATIONS:
            raise ValueError(f"Unknown population '{population}' (expected one of {', '.join(POPULATIONS)})")
        if population == "ground":
            return self.kind == KIND_GROUND
        if population == "uav":
            return self.kind == KIND_CORRIDOR
        return np.ones(len(self), dtype=bool)


def population_mass(grid: QuadratureGrid, population: Population) -> float:
    return float(np.sum(grid.weight[grid.mask(population)]))


def _lattice(region: RectRegion, resolution: float) -> Tuple[np.ndarray, np.ndarray, float]:
    nx = int(np.floor((region.x_max - region.x_min) / resolution + 1e-9))
    ny = int(np.floor((region.y_max - region.y_min) / resolution + 1e-9))
    if nx < 1 or ny < 1:
        return np.empty(0), np.empty(0), 0.0
    dx = (region.x_max - region.x_min) / nx
    dy = (region.y_max - region.y_min) / ny
    xs = region.x_min + (np.arange(nx) + 0.5) * dx
    ys = region.y_min + (np.arange(ny) + 0.5) * dy
    gx, gy = np.meshgrid(xs, ys)  # rows follow y, row-major ravel
    return gx.ravel(), gy.ravel(), dx * dy


def _frozen(values) -> np.ndarray:
    array = np.ascontiguousarray(values)
    array.setflags(write=False)
    return array


def discretize(
    regions: Sequence[RectRegion],
    density: MixtureDensity,
    resolution_ground: float,
    resolution_corridor: float,
) -> QuadratureGrid:
    """
    Build the quadrature grid for lambda = alpha*lambda_G + (1-alpha)*lambda_U.
    Each population is uniform over the union of its regions, so a point's
    weight is its cell area over the population area times the population share.
    Populations with zero share are left out of the grid.
    """
    alpha = density.alpha
    has_ground = any(r.kind == GROUND for r in regions)
    has_corridor = any(r.kind == CORRIDOR for r in regions)
    if alpha > 0.0 and not has_ground:
        raise InvalidMixture(f"alpha={alpha} needs at least one ground region")
    if alpha < 1.0 and not has_corridor:
        raise InvalidMixture(f"alpha={alpha} needs at least one corridor")

    shares = {GROUND: alpha, CORRIDOR: 1.0 - alpha}
    tags = region_tags(regions)

    xs, ys, hs, areas, kinds, region_ids = [], [], [], [], [], []
    for index, region in enumerate(regions):
        if shares[region.kind] == 0.0:
            continue
        resolution = resolution_ground if region.kind == GROUND else resolution_corridor
        px, py, cell_area = _lattice(region, resolution)
        if px.size == 0:
            raise EmptyRegion(f"region {tags[index]} ({region.name or 'unnamed'}) has no points at resolution {resolution} m")
        xs.append(px)
        ys.append(py)
        hs.append(np.full(px.size, region.height))
        areas.append(np.full(px.size, cell_area))
        kinds.append(np.full(px.size, KIND_GROUND if region.kind == GROUND else KIND_CORRIDOR, dtype=np.int8))
        region_ids.append(np.full(px.size, index, dtype=np.int32))

    area = np.concatenate(areas)
    kind = np.concatenate(kinds)
    weight = np.zeros_like(area)
    for code, share in ((KIND_GROUND, shares[GROUND]), (KIND_CORRIDOR, shares[CORRIDOR])):
        members = kind == code
        if share > 0.0 and members.any():
            weight[members] = share * area[members] / np.sum(area[members])
    weight = weight / np.sum(weight)

    grid = QuadratureGrid(
        x=_frozen(np.concatenate(xs)),
        y=_frozen(np.concatenate(ys)),
        h=_frozen(np.concatenate(hs)),
        weight=_frozen(weight),
        kind=_frozen(kind),
        region=_frozen(np.concatenate(region_ids)),
        tags=tuple(tags),
        resolution_ground=resolution_ground,
        resolution_corridor=resolution_corridor,
    )
    logger.info(
        f"📊 Quadrature grid: {len(grid)} points "
        f"({int(np.sum(kind == KIND_GROUND))} ground, {int(np.sum(kind == KIND_CORRIDOR))} corridor), alpha={alpha}"
    )
    return grid


def require_population(grid: QuadratureGrid, population: Population) -> np.ndarray:
    """Mask of the population, raising EmptyPopulation when it carries no mass"""
    members = grid.mask(population)
    if not members.any() or float(np.sum(grid.weight[members])) <= 0.0:
        raise EmptyPopulation(f"population '{population}' has zero mass on this grid")
    return members
