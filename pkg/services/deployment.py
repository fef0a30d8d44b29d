"""
Hexagonal site layout and the case-study scenario.

Lattice convention: pointy-top hexagonal cells, so the six first-tier sites sit
at multiples of 60 degrees starting due east. Sites are numbered from the
centre outwards, each tier counterclockwise from its eastmost site. Site i
carries stations 3i-2, 3i-1, 3i (one per sector azimuth, in the order given).
"""
import logging
import math
from typing import List, Sequence, Tuple

from models import (
    AntennaPattern,
    BaseStation,
    GridConfig,
    HexDeployment,
    OptimizerConfig,
    PathlossParams,
    RectRegion,
    ScenarioConfig,
    wrap_degrees,
)

logger = logging.getLogger(__name__)

# ─── case-study constants ────────────────────────────────────────────
CASE_STUDY_ISD = 500.0
CASE_STUDY_TIERS = 2
CASE_STUDY_AZIMUTHS = [0.0, 120.0, 240.0]
CASE_STUDY_BS_HEIGHT = 25.0
CASE_STUDY_TX_POWER = 43.0
CASE_STUDY_GROUND_HEIGHT = 1.5
CASE_STUDY_CORRIDORS = [  # (x_min, x_max, height)
    (-320.0, -280.0, 150.0),
    (-120.0, -80.0, 120.0),
    (80.0, 120.0, 120.0),
    (280.0, 320.0, 150.0),
]
CASE_STUDY_CORRIDOR_Y = (-400.0, 400.0)


def _unit(angle_deg: float) -> Tuple[float, float]:
    return math.cos(math.radians(angle_deg)), math.sin(math.radians(angle_deg))


def hex_sites(isd: float, tiers: int) -> List[Tuple[float, float]]:
    """Site centres: origin, then each ring walked counterclockwise from due east"""
    directions = [_unit(60.0 * k) for k in range(6)]
    sites = [(0.0, 0.0)]
    for ring in range(1, tiers + 1):
        # ring corners are ring * isd * direction[k]; walk each side towards the next corner
        x, y = ring * isd * directions[0][0], ring * isd * directions[0][1]
        for side in range(6):
            step_x, step_y = directions[(side + 2) % 6]
            for _ in range(ring):
                sites.append((x, y))
                x += isd * step_x
                y += isd * step_y
    return sites


def hex_deployment(
    isd: float,
    tiers: int,
    sector_azimuths: Sequence[float],
    bs_height: float,
    tx_power: float,
) -> List[BaseStation]:
    if isd <= 0:
        raise ValueError(f"isd must be > 0, got {isd}")
    if tiers < 0:
        raise ValueError(f"tiers must be >= 0, got {tiers}")
    stations = []
    for x, y in hex_sites(isd, tiers):
        for azimuth in sector_azimuths:
            stations.append(
                BaseStation(
                    id=len(stations) + 1,
                    px=x,
                    py=y,
                    h_b=bs_height,
                    azimuth=wrap_degrees(azimuth),
                    tx_power=tx_power,
                )
            )
    logger.info(f"📡 Hex deployment: {len(stations) // max(1, len(sector_azimuths))} sites, {len(stations)} stations (ISD {isd} m)")
    return stations


def build_stations(scenario: ScenarioConfig) -> List[BaseStation]:
    if scenario.stations is not None:
        return list(scenario.stations)
    d: HexDeployment = scenario.deployment
    return hex_deployment(d.isd, d.tiers, d.sector_azimuths, d.bs_height, d.tx_power)


def case_study_preset() -> ScenarioConfig:
    """19 sites x 3 sectors over a 1.5 km square with four UAV corridors"""
    corridors = [
        RectRegion(
            x_min=x_min,
            x_max=x_max,
            y_min=CASE_STUDY_CORRIDOR_Y[0],
            y_max=CASE_STUDY_CORRIDOR_Y[1],
            height=height,
            kind="corridor",
            name=f"corridor {u}",
        )
        for u, (x_min, x_max, height) in enumerate(CASE_STUDY_CORRIDORS, start=1)
    ]
    ground = RectRegion(
        x_min=-750.0,
        x_max=750.0,
        y_min=-750.0,
        y_max=750.0,
        height=CASE_STUDY_GROUND_HEIGHT,
        kind="ground",
        name="ground",
    )
    return ScenarioConfig(
        name="case_study",
        deployment=HexDeployment(
            isd=CASE_STUDY_ISD,
            tiers=CASE_STUDY_TIERS,
            sector_azimuths=CASE_STUDY_AZIMUTHS,
            bs_height=CASE_STUDY_BS_HEIGHT,
            tx_power=CASE_STUDY_TX_POWER,
        ),
        initial_tilts=0.0,
        regions=[ground, *corridors],
        alpha=0.5,
        pattern=AntennaPattern(a_max=14.0, theta_3db=10.0, phi_3db=65.0),
        pathloss_ground=PathlossParams(a=38.42, b=30.0),
        pathloss_uav=PathlossParams(a=34.02, b=22.0),
        grid=GridConfig(resolution_ground=10.0, resolution_corridor=5.0),
        optimizer=OptimizerConfig(eta0=0.005, kappa=0.999, eps1=1e-8, eps2=1e-9),
    )
