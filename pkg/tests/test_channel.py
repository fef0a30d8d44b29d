"""
Antenna gain, angle, pathloss and RSS checks against hand-computed values,
plus symmetry properties of the link budget.

Run:  pytest tests/test_channel.py -v
"""
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from models import AntennaPattern, BaseStation, Location, PathlossParams, wrap_degrees
from services import channel
from services.errors import DegenerateGeometry

logging.basicConfig(level=logging.INFO, format="%(levelname)s:%(name)s: %(message)s")
logger = logging.getLogger("channel_tests")

DATA_DIR = Path(__file__).parent
PATTERN = AntennaPattern(a_max=14.0, theta_3db=10.0, phi_3db=65.0)


def _load(name):
    with open(DATA_DIR / name, "r", encoding="utf-8") as f:
        return json.load(f)


CHANNEL_CASES = _load("channel_cases.json")
GAIN_CASES = _load("gain_cases.json")


def _station(fields, station_id=1):
    return BaseStation(id=station_id, tx_power=43.0, **fields)


@pytest.mark.parametrize("case", CHANNEL_CASES, ids=[c["label"] for c in CHANNEL_CASES])
def test_channel_oracle(case):
    bs = _station(case["bs"])
    loc = Location(**case["loc"])
    op = case["op"]
    if op == "elevation_angle":
        value = channel.elevation_angle(bs, loc)
    elif op == "azimuth_angle":
        value = channel.azimuth_angle(bs, loc)
    elif op == "pathloss":
        value = channel.pathloss(PathlossParams(**case["params"]), bs, loc)
    else:
        value = channel.rss(bs, case["tilt"], PATTERN, PathlossParams(**case["params"]), loc)
    logger.info(f"🧪 {case['label']}: {value!r}")
    assert value == pytest.approx(case["expected"], abs=case["tol"])


@pytest.mark.parametrize("case", GAIN_CASES, ids=[c["label"] for c in GAIN_CASES])
def test_gain_oracle(case):
    if case["op"] == "vertical":
        pattern = AntennaPattern(a_max=14.0, theta_3db=case["beamwidth"], phi_3db=65.0)
        value = channel.vertical_gain(pattern, case["tilt"], case["angle"])
    else:
        pattern = AntennaPattern(a_max=14.0, theta_3db=10.0, phi_3db=case["beamwidth"])
        value = channel.horizontal_gain(pattern, 0.0, case["angle"])
    assert value == pytest.approx(case["expected"], abs=1e-9)


def test_gains_non_positive_and_zero_only_on_boresight():
    rng = np.random.default_rng(7)
    tilts = rng.uniform(-90, 90, 2000)
    angles = rng.uniform(-90, 90, 2000)
    vertical = channel.vertical_gain_db(10.0, tilts, angles)
    horizontal = channel.horizontal_gain_db(65.0, channel.wrap_offset_deg(rng.uniform(-720, 720, 2000)))
    assert np.all(vertical <= 0.0)
    assert np.all(horizontal <= 0.0)
    assert np.all(vertical[tilts != angles] < 0.0)
    assert channel.vertical_gain_db(10.0, 12.5, 12.5) == 0.0
    assert channel.horizontal_gain_db(65.0, 0.0) == 0.0


def test_wrapped_azimuth_offset_stays_in_range():
    rng = np.random.default_rng(11)
    # all four quadrants, including points on both axes
    dx = np.concatenate([rng.uniform(-500, 500, 4000), np.zeros(50), rng.uniform(-500, 500, 50)])
    dy = np.concatenate([rng.uniform(-500, 500, 4000), rng.uniform(-500, 500, 50), np.zeros(50)])
    boresight = rng.uniform(-180, 180, dx.size)
    offset = channel.azimuth_offset_deg(dx, dy, boresight)
    assert np.all(offset > -180.0)
    assert np.all(offset <= 180.0)


@pytest.mark.parametrize(
    "angle, expected",
    [(240.0, -120.0), (-180.0, 180.0), (180.0, 180.0), (540.0, 180.0), (-190.0, 170.0), (0.0, 0.0)],
    ids=["240", "minus-180", "180", "540", "minus-190", "zero"],
)
def test_wrap_degrees(angle, expected):
    assert wrap_degrees(angle) == pytest.approx(expected, abs=1e-12)


def test_wrap_degrees_keeps_in_range_angles_exact():
    assert wrap_degrees(0.1) == 0.1
    for angle in np.random.default_rng(5).uniform(-720.0, 720.0, 500):
        once = wrap_degrees(float(angle))
        assert -180.0 < once <= 180.0
        assert wrap_degrees(once) == once


def test_rss_invariant_under_translation_and_rotation():
    rng = np.random.default_rng(3)
    params = PathlossParams(a=38.42, b=30.0)
    for _ in range(200):
        bs = BaseStation(
            id=1,
            px=rng.uniform(-500, 500),
            py=rng.uniform(-500, 500),
            h_b=25.0,
            azimuth=wrap_degrees(rng.uniform(-180, 180)),
            tx_power=43.0,
        )
        loc = Location(qx=rng.uniform(-500, 500), qy=rng.uniform(-500, 500), h=rng.uniform(0, 200))
        tilt = rng.uniform(-30, 30)
        reference = channel.rss(bs, tilt, PATTERN, params, loc)

        shift_x, shift_y = rng.uniform(-1000, 1000, 2)
        moved = bs.model_copy(update={"px": bs.px + shift_x, "py": bs.py + shift_y})
        moved_loc = Location(qx=loc.qx + shift_x, qy=loc.qy + shift_y, h=loc.h)
        assert channel.rss(moved, tilt, PATTERN, params, moved_loc) == pytest.approx(reference, abs=1e-9)

        turn = rng.uniform(-180, 180)
        cx, cy = rng.uniform(-300, 300, 2)
        c, s = math.cos(math.radians(turn)), math.sin(math.radians(turn))

        def rotate(x, y):
            return cx + c * (x - cx) - s * (y - cy), cy + s * (x - cx) + c * (y - cy)

        rx, ry = rotate(bs.px, bs.py)
        lx, ly = rotate(loc.qx, loc.qy)
        rotated = bs.model_copy(update={"px": rx, "py": ry, "azimuth": wrap_degrees(bs.azimuth + turn)})
        rotated_loc = Location(qx=lx, qy=ly, h=loc.h)
        assert channel.rss(rotated, tilt, PATTERN, params, rotated_loc) == pytest.approx(reference, abs=1e-9)


def test_rss_is_concave_quadratic_in_tilt_peaking_at_elevation():
    bs = BaseStation(id=1, px=0.0, py=0.0, h_b=25.0, azimuth=30.0, tx_power=43.0)
    loc = Location(qx=180.0, qy=95.0, h=1.5)
    params = PathlossParams(a=38.42, b=30.0)
    elev = channel.elevation_angle(bs, loc)
    peak = channel.rss(bs, elev, PATTERN, params, loc)
    for tilt in (-40.0, -10.0, 0.0, 7.5, 25.0):
        second = (
            channel.rss(bs, tilt + 1.0, PATTERN, params, loc)
            - 2.0 * channel.rss(bs, tilt, PATTERN, params, loc)
            + channel.rss(bs, tilt - 1.0, PATTERN, params, loc)
        )
        assert second == pytest.approx(-24.0 / PATTERN.theta_3db**2, abs=1e-9)
        assert channel.rss(bs, tilt, PATTERN, params, loc) < peak


def test_aligned_link_only_loses_pathloss():
    bs = BaseStation(id=1, px=0.0, py=0.0, h_b=25.0, azimuth=0.0, tx_power=43.0)
    loc = Location(qx=300.0, qy=0.0, h=1.5)
    params = PathlossParams(a=38.42, b=30.0)
    tilt = channel.elevation_angle(bs, loc)
    expected = 43.0 + 14.0 - channel.pathloss(params, bs, loc)
    assert channel.rss(bs, tilt, PATTERN, params, loc) == pytest.approx(expected, abs=1e-12)


def test_colocated_user_is_degenerate():
    bs = BaseStation(id=4, px=10.0, py=20.0, h_b=25.0, azimuth=0.0, tx_power=43.0)
    loc = Location(qx=10.0, qy=20.0, h=25.0)
    with pytest.raises(DegenerateGeometry):
        channel.pathloss(PathlossParams(a=38.42, b=30.0), bs, loc)
    with pytest.raises(DegenerateGeometry):
        channel.rss(bs, 0.0, PATTERN, PathlossParams(a=38.42, b=30.0), loc)
