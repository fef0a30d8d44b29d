"""
Small scenario builders shared by the test modules
"""
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from models import AntennaPattern, BaseStation, OptimizerConfig, PathlossParams, RectRegion, ScenarioConfig

PATTERN = AntennaPattern(a_max=14.0, theta_3db=10.0, phi_3db=65.0)
GROUND_PL = PathlossParams(a=38.42, b=30.0)
UAV_PL = PathlossParams(a=34.02, b=22.0)


def scenario_from(
    sites,
    regions,
    alpha=1.0,
    tilts=0.0,
    optimizer=None,
    resolution_ground=10.0,
    resolution_corridor=5.0,
    name="test",
):
    """sites: (px, py, azimuth) per station, all at 25 m and 43 dBm"""
    stations = [
        BaseStation(id=i, px=px, py=py, h_b=25.0, azimuth=az, tx_power=43.0) for i, (px, py, az) in enumerate(sites, start=1)
    ]
    return ScenarioConfig(
        name=name,
        stations=stations,
        initial_tilts=tilts,
        regions=regions,
        alpha=alpha,
        pattern=PATTERN,
        pathloss_ground=GROUND_PL if alpha > 0 else None,
        pathloss_uav=UAV_PL if alpha < 1 else None,
        grid={"resolution_ground": resolution_ground, "resolution_corridor": resolution_corridor},
        optimizer=optimizer or OptimizerConfig(),
    )


def random_scenario(rng: np.random.Generator, n_stations: int, alpha: float = 0.5, **kwargs) -> ScenarioConfig:
    """Stations scattered over a 400 m square, one ground patch and one or two corridors"""
    sites = [(float(x), float(y), float(az)) for x, y, az in zip(*rng.uniform(-200, 200, (2, n_stations)), rng.uniform(-180, 180, n_stations))]
    regions = [RectRegion(x_min=-210.0, x_max=210.0, y_min=-210.0, y_max=210.0, height=1.5, kind="ground")]
    for _ in range(int(rng.integers(1, 3))):
        x0 = float(rng.uniform(-200, 150))
        regions.append(
            RectRegion(x_min=x0, x_max=x0 + 30.0, y_min=-150.0, y_max=150.0, height=float(rng.uniform(60, 160)), kind="corridor")
        )
    return scenario_from(sites, regions, alpha=alpha, resolution_ground=30.0, resolution_corridor=10.0, **kwargs)
