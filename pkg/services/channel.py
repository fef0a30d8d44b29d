"""
Closed-form antenna gain, pathloss and RSS evaluation.

All angles are degrees. The array helpers broadcast over numpy inputs and are
what the partition and optimizer code call; the object-level functions below
them wrap the same helpers for a single station/location pair.
"""
import logging

import numpy as np

from models import AntennaPattern, BaseStation, Location, PathlossParams
from services.errors import DegenerateGeometry

logger = logging.getLogger(__name__)


def wrap_offset_deg(offset):
    """Wrap angle differences onto (-180, +180]"""
    wrapped = np.mod(np.asarray(offset, dtype=float) + 180.0, 360.0)
    wrapped = np.where(wrapped == 0.0, 360.0, wrapped)
    return wrapped - 180.0


def elevation_deg(dx, dy, dh):
    """
    Elevation of the user seen from the antenna.
    A user vertically above (below) the antenna is at +90 (-90); same point and height gives 0.
    """
    horizontal = np.hypot(dx, dy)
    return np.degrees(np.arctan2(dh, horizontal))


def azimuth_offset_deg(dx, dy, boresight):
    """Horizontal mismatch between the user bearing and the boresight, in (-180, +180]"""
    dx = np.asarray(dx, dtype=float)
    dy = np.asarray(dy, dtype=float)
    bearing = np.degrees(np.arctan2(dy, dx))
    offset = wrap_offset_deg(bearing - boresight)
    # 2D-colocated users see no horizontal mismatch
    return np.where((dx == 0.0) & (dy == 0.0), 0.0, offset)


def distance_3d(dx, dy, dh):
    return np.sqrt(dx * dx + dy * dy + dh * dh)


def vertical_gain_db(theta_3db: float, tilt, elev):
    """Main-lobe vertical gain, <= 0 dB, no sidelobe floor"""
    mismatch = np.asarray(elev, dtype=float) - tilt
    return -(12.0 / theta_3db**2) * (mismatch * mismatch)


def horizontal_gain_db(phi_3db: float, offset):
    offset = np.asarray(offset, dtype=float)
    return -(12.0 / phi_3db**2) * (offset * offset)


def pathloss_db(a, b, d3):
    return a + b * np.log10(d3)


def static_rss_db(tx_power, a_max: float, h_gain, loss):
    """RSS without the tilt-dependent vertical term"""
    return (tx_power + a_max + h_gain) - loss


# ─── single station / single location ────────────────────────────────


def _deltas(bs: BaseStation, loc: Location):
    return loc.qx - bs.px, loc.qy - bs.py, loc.h - bs.h_b


def elevation_angle(bs: BaseStation, loc: Location) -> float:
    dx, dy, dh = _deltas(bs, loc)
    return float(elevation_deg(dx, dy, dh))


def azimuth_angle(bs: BaseStation, loc: Location) -> float:
    """
    Azimuth of the user as seen from the station, expressed so that its
    difference to the boresight lies in (-180, +180]
    """
    dx, dy, _ = _deltas(bs, loc)
    return bs.azimuth + float(azimuth_offset_deg(dx, dy, bs.azimuth))


def vertical_gain(pattern: AntennaPattern, tilt: float, elev: float) -> float:
    return float(vertical_gain_db(pattern.theta_3db, tilt, elev))


def horizontal_gain(pattern: AntennaPattern, bs_azimuth: float, loc_azimuth: float) -> float:
    return float(horizontal_gain_db(pattern.phi_3db, loc_azimuth - bs_azimuth))


def pathloss(params: PathlossParams, bs: BaseStation, loc: Location) -> float:
    dx, dy, dh = _deltas(bs, loc)
    d3 = float(distance_3d(dx, dy, dh))
    if d3 == 0.0:
        raise DegenerateGeometry(f"location ({loc.qx}, {loc.qy}, {loc.h}) coincides with station {bs.id}")
    return float(pathloss_db(params.a, params.b, d3))


def rss(bs: BaseStation, tilt: float, pattern: AntennaPattern, params: PathlossParams, loc: Location) -> float:
    """Received signal strength in dBm (no fading)"""
    loss = pathloss(params, bs, loc)
    dx, dy, dh = _deltas(bs, loc)
    h_gain = horizontal_gain_db(pattern.phi_3db, azimuth_offset_deg(dx, dy, bs.azimuth))
    v_gain = vertical_gain_db(pattern.theta_3db, tilt, elevation_deg(dx, dy, dh))
    return float(static_rss_db(bs.tx_power, pattern.a_max, h_gain, loss) + v_gain)
