"""
Pydantic models for stations, regions, channel parameters and scenario files
"""
import math
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_core import PydanticCustomError

FORMAT_VERSION = 1

TILT_MIN_DEG = -90.0
TILT_MAX_DEG = 90.0

GROUND = "ground"
CORRIDOR = "corridor"


def wrap_degrees(angle: float) -> float:
    """Map an angle onto (-180, +180]; angles already in range come back unchanged"""
    if -180.0 < angle <= 180.0:
        return float(angle)
    wrapped = math.fmod(angle + 180.0, 360.0)
    if wrapped <= 0.0:
        wrapped += 360.0
    return wrapped - 180.0


def _invariant(field: str, detail: str) -> PydanticCustomError:
    return PydanticCustomError("scenario_invariant", "{field}: {detail}", {"field": field, "detail": detail})


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class AntennaPattern(StrictModel):
    a_max: float  # dBi at boresight
    theta_3db: float = Field(gt=0)  # vertical HPBW, degrees
    phi_3db: float = Field(gt=0)  # horizontal HPBW, degrees


class BaseStation(StrictModel):
    id: int = Field(ge=1)
    px: float
    py: float
    h_b: float = Field(gt=0)
    azimuth: float = Field(ge=-180.0, le=180.0)
    tx_power: float  # dBm


class Location(StrictModel):
    qx: float
    qy: float
    h: float = Field(ge=0)


class PathlossParams(StrictModel):
    a: float  # intercept, dB
    b: float = Field(gt=0)  # 10x pathloss exponent


class RectRegion(StrictModel):
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    height: float = Field(ge=0)
    kind: Literal["ground", "corridor"]
    name: str = ""

    @model_validator(mode="after")
    def _check_bounds(self):
        if not self.x_min < self.x_max:
            raise _invariant("x_min", "x_min must be < x_max")
        if not self.y_min < self.y_max:
            raise _invariant("y_min", "y_min must be < y_max")
        return self

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)


class MixtureDensity(StrictModel):
    alpha: float = Field(ge=0.0, le=1.0)


class HexDeployment(StrictModel):
    """Hexagonal site lattice, one station per sector azimuth at every site"""
    isd: float = Field(gt=0)
    tiers: int = Field(ge=0)
    sector_azimuths: List[float] = Field(min_length=1)
    bs_height: float = Field(gt=0)
    tx_power: float

    @field_validator("sector_azimuths")
    @classmethod
    def _normalize_azimuths(cls, values: List[float]) -> List[float]:
        # 240 deg is stored as -120 deg
        return [wrap_degrees(float(v)) for v in values]

    @property
    def site_count(self) -> int:
        return 1 + 3 * self.tiers * (self.tiers + 1)

    @property
    def station_count(self) -> int:
        return self.site_count * len(self.sector_azimuths)


class GridConfig(StrictModel):
    resolution_ground: float = Field(default=10.0, gt=0)
    resolution_corridor: float = Field(default=5.0, gt=0)


class OptimizerConfig(StrictModel):
    eta0: float = Field(default=0.005, gt=0.0, lt=1.0)
    kappa: float = Field(default=0.999, gt=0.0, lt=1.0)
    eps1: float = Field(default=1e-8, gt=0.0)
    eps2: float = Field(default=1e-9, gt=0.0)
    max_inner_iters: int = Field(default=10_000, ge=1)
    max_outer_iters: int = Field(default=500, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)


class ScenarioConfig(StrictModel):
    """Complete experiment description, the content of a scenario YAML file"""
    format_version: Literal[1] = FORMAT_VERSION
    name: str = "scenario"
    deployment: Optional[HexDeployment] = None
    stations: Optional[List[BaseStation]] = None
    initial_tilts: Union[float, List[float]] = 0.0
    regions: List[RectRegion] = Field(min_length=1)
    alpha: float = Field(ge=0.0, le=1.0)
    pattern: AntennaPattern
    pathloss_ground: Optional[PathlossParams] = None
    pathloss_uav: Optional[PathlossParams] = None
    grid: GridConfig = GridConfig()
    optimizer: OptimizerConfig = OptimizerConfig()

    @model_validator(mode="after")
    def _check_scenario(self):
        if (self.deployment is None) == (self.stations is None):
            raise _invariant("stations", "give exactly one of 'deployment' or 'stations'")

        if self.stations is not None:
            if not self.stations:
                raise _invariant("stations", "station list is empty")
            ids = [s.id for s in self.stations]
            if ids != list(range(1, len(ids) + 1)):
                raise _invariant("stations", "station ids must be 1..N in order")

        n = self.station_count
        tilts = self.initial_tilts if isinstance(self.initial_tilts, list) else [self.initial_tilts]
        if isinstance(self.initial_tilts, list) and len(tilts) != n:
            raise _invariant("initial_tilts", f"expected {n} tilts, got {len(tilts)}")
        if any(not TILT_MIN_DEG <= t <= TILT_MAX_DEG for t in tilts):
            raise _invariant("initial_tilts", "tilts must lie in [-90, +90]")

        has_ground = any(r.kind == GROUND for r in self.regions)
        has_corridor = any(r.kind == CORRIDOR for r in self.regions)
        if self.alpha > 0.0:
            if not has_ground:
                raise _invariant("alpha", "alpha > 0 requires a ground region")
            if self.pathloss_ground is None:
                raise _invariant("pathloss_ground", "required when alpha > 0")
        if self.alpha < 1.0:
            if not has_corridor:
                raise _invariant("alpha", "alpha < 1 requires a corridor region")
            if self.pathloss_uav is None:
                raise _invariant("pathloss_uav", "required when alpha < 1")
        return self

    @property
    def station_count(self) -> int:
        if self.stations is not None:
            return len(self.stations)
        return self.deployment.station_count

    @property
    def density(self) -> MixtureDensity:
        return MixtureDensity(alpha=self.alpha)

    def initial_tilt_list(self) -> List[float]:
        if isinstance(self.initial_tilts, list):
            return [float(t) for t in self.initial_tilts]
        return [float(self.initial_tilts)] * self.station_count
