"""
End-to-end subcommand runs on small scenarios: artifacts, exit codes,
reproducibility and optimize/evaluate consistency.

Run:  pytest tests/test_cli.py -v
"""
import logging
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
import yaml

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from builders import GROUND_PL, PATTERN
from commands.evaluate import EVALUATION_SUMMARY, cmd_evaluate, run_evaluation
from commands.gradcheck import cmd_gradcheck
from commands.optimize import cmd_optimize, run_optimization
from commands.preset import cmd_preset
from commands.sweep import COVERAGE_SUMMARY, cmd_sweep
from main import main
from services import artifacts, channel
from services.config_io import load_config
from services.deployment import case_study_preset
from services.network import load_network

logging.basicConfig(level=logging.INFO, format="%(levelname)s:%(name)s: %(message)s")
logger = logging.getLogger("cli_tests")

SCENARIO = """\
format_version: 1
name: two-cells
stations:
- {id: 1, px: -100.0, py: 0.0, h_b: 25.0, azimuth: 0.0, tx_power: 43.0}
- {id: 2, px: 100.0, py: 0.0, h_b: 25.0, azimuth: 180.0, tx_power: 43.0}
regions:
- {x_min: -150.0, x_max: 150.0, y_min: -50.0, y_max: 50.0, height: 1.5, kind: ground}
- {x_min: -20.0, x_max: 20.0, y_min: -50.0, y_max: 50.0, height: 120.0, kind: corridor}
alpha: 0.5
pattern: {a_max: 14.0, theta_3db: 10.0, phi_3db: 65.0}
pathloss_ground: {a: 38.42, b: 30.0}
pathloss_uav: {a: 34.02, b: 22.0}
optimizer:
  eta0: 0.5
  max_inner_iters: 300
  max_outer_iters: 6
  seed: 3
"""

SINGLE_STATION = """\
format_version: 1
stations:
- {id: 1, px: 0.0, py: 0.0, h_b: 25.0, azimuth: 45.0, tx_power: 43.0}
regions:
- {x_min: 10.0, x_max: 60.0, y_min: 10.0, y_max: 40.0, height: 1.5, kind: ground}
alpha: 1.0
pattern: {a_max: 14.0, theta_3db: 10.0, phi_3db: 65.0}
pathloss_ground: {a: 38.42, b: 30.0}
"""

ONE_POINT = SINGLE_STATION.replace("x_max: 60.0, y_min: 10.0, y_max: 40.0", "x_max: 20.0, y_min: 10.0, y_max: 20.0")

CSV_FILES = ["tilts.csv", "partition.csv", "cdf_ground.csv", "cdf_uav.csv", "convergence.csv"]


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.yaml"
    path.write_text(SCENARIO, encoding="utf-8")
    return path


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_optimize_writes_every_artifact(scenario_file, tmp_path):
    out = tmp_path / "run"
    status = cmd_optimize(scenario_file, out, overrides=["optimizer.eps2=1.0"], threads=1)
    assert status == 0
    for name in CSV_FILES + [artifacts.RESOLVED_CONFIG, artifacts.RUN_SUMMARY]:
        assert (out / name).is_file(), name

    tilts = pd.read_csv(out / "tilts.csv")
    assert list(tilts.columns[:6]) == ["station_id", "x", "y", "azimuth_deg", "tilt_deg", "cell_mass"]
    assert tilts["station_id"].tolist() == [1, 2]
    assert tilts["cell_mass"].sum() == pytest.approx(1.0, abs=1e-8)

    partition = pd.read_csv(out / "partition.csv")
    assert list(partition.columns) == ["x", "y", "h", "region_tag", "weight", "station_id", "rss_dbm"]
    assert set(partition["region_tag"]) == {"ground", "corridor_1"}

    for name in ("cdf_ground.csv", "cdf_uav.csv"):
        cdf = pd.read_csv(out / name)
        assert list(cdf.columns) == ["rss_dbm", "cdf"]
        assert cdf["cdf"].iloc[-1] == pytest.approx(1.0, abs=1e-8)
        assert cdf["rss_dbm"].is_monotonic_increasing

    convergence = pd.read_csv(out / "convergence.csv")
    assert list(convergence.columns[:2]) == ["outer_iter", "phi_dbm"]
    assert convergence["outer_iter"].tolist() == [0, 1]

    summary = yaml.safe_load((out / artifacts.RUN_SUMMARY).read_text(encoding="utf-8"))
    assert summary["termination"] == "threshold"
    assert summary["seed"] == 3


def test_optimize_cap_exit_code_still_writes_results(scenario_file, tmp_path):
    out = tmp_path / "capped"
    status = cmd_optimize(scenario_file, out, overrides=["optimizer.max_outer_iters=1", "optimizer.eps2=1e-300"], threads=1)
    assert status == 2
    assert (out / "tilts.csv").is_file()
    summary = yaml.safe_load((out / artifacts.RUN_SUMMARY).read_text(encoding="utf-8"))
    assert summary["termination"] == "cap"


def test_seed_flag_lands_in_resolved_config(scenario_file, tmp_path):
    out = tmp_path / "seeded"
    cmd_optimize(scenario_file, out, overrides=["optimizer.max_outer_iters=1"], threads=1, seed=42)
    resolved = load_config(out / artifacts.RESOLVED_CONFIG)
    assert resolved.optimizer.seed == 42
    assert resolved.optimizer.max_outer_iters == 1


def test_reruns_are_byte_identical_for_any_thread_count(scenario_file, tmp_path):
    cmd_optimize(scenario_file, tmp_path / "a", threads=1)
    cmd_optimize(scenario_file, tmp_path / "b", threads=4)
    for name in CSV_FILES + [artifacts.RESOLVED_CONFIG]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name


def test_resolved_config_reproduces_the_run(scenario_file, tmp_path):
    cmd_optimize(scenario_file, tmp_path / "first", overrides=["alpha=0.25"], threads=1)
    cmd_optimize(tmp_path / "first" / artifacts.RESOLVED_CONFIG, tmp_path / "second", threads=2)
    for name in CSV_FILES:
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes(), name


def test_evaluate_reproduces_final_phi_exactly(scenario_file, tmp_path):
    _, result, _ = run_optimization(scenario_file, tmp_path / "run", threads=1)
    evaluation = run_evaluation(scenario_file, tmp_path / "run" / "tilts.csv", tmp_path / "eval", threads=2)
    assert evaluation.phi == result.trace.final_phi
    assert np.array_equal(evaluation.tilts, result.tilts)
    summary = yaml.safe_load((tmp_path / "eval" / EVALUATION_SUMMARY).read_text(encoding="utf-8"))
    assert summary["phi_dbm"] == result.trace.final_phi
    assert (tmp_path / "eval" / artifacts.RESOLVED_CONFIG).is_file()


def test_evaluate_cross_population(scenario_file, tmp_path):
    cmd_optimize(scenario_file, tmp_path / "ground", overrides=["alpha=1"], threads=1)
    status = cmd_evaluate(scenario_file, tmp_path / "ground" / "tilts.csv", tmp_path / "cross", overrides=["alpha=0"])
    assert status == 0
    assert len(pd.read_csv(tmp_path / "cross" / "cdf_uav.csv")) > 0
    # absent population: header only
    ground_cdf = pd.read_csv(tmp_path / "cross" / "cdf_ground.csv")
    assert list(ground_cdf.columns) == ["rss_dbm", "cdf"]
    assert ground_cdf.empty


def test_evaluate_single_station_matches_hand_mean(tmp_path):
    config = _write(tmp_path, "single.yaml", SINGLE_STATION)
    tilts = _write(tmp_path, "tilts.csv", "station_id,tilt_deg\n1,0\n")
    evaluation = run_evaluation(config, tilts, tmp_path / "eval")
    network = load_network(load_config(config))
    expected = 0.0
    for i in range(len(network.grid)):
        point = network.grid.point(i)
        expected += point.weight * channel.rss(network.stations[0], 0.0, PATTERN, GROUND_PL, point.loc)
    assert evaluation.phi == pytest.approx(expected, abs=1e-9)


def test_evaluate_rejects_wrong_tilt_count(scenario_file, tmp_path):
    tilts = _write(tmp_path, "three.csv", "station_id,tilt_deg\n1,0\n2,0\n3,0\n")
    assert cmd_evaluate(scenario_file, tilts, tmp_path / "eval") == 1


def test_invalid_config_exits_with_error(scenario_file, tmp_path):
    assert cmd_optimize(scenario_file, tmp_path / "bad", overrides=["alpha=1.5"]) == 1
    assert cmd_optimize(tmp_path / "nowhere.yaml", tmp_path / "bad") == 1


def test_gradcheck_passes(scenario_file):
    assert cmd_gradcheck(scenario_file, step_deg=1e-4, trials=5, threads=1) == 0


def test_gradcheck_on_single_point_grid(tmp_path):
    config = _write(tmp_path, "point.yaml", ONE_POINT)
    assert cmd_gradcheck(config, step_deg=1e-4, trials=3) == 0


def test_sweep_cross_evaluates_every_mixture(scenario_file, tmp_path):
    out = tmp_path / "sweep"
    status = cmd_sweep(scenario_file, out, overrides=["optimizer.max_outer_iters=3"], threads=1)
    assert status in (0, 2)
    for alpha in ("alpha_1", "alpha_0", "alpha_0.5"):
        assert (out / alpha / "tilts.csv").is_file(), alpha
    summary = pd.read_csv(out / COVERAGE_SUMMARY)
    assert summary["tilts_alpha"].tolist() == [1.0, 0.0, 0.5]
    for column in ("mean_ground_rss_dbm", "mean_uav_rss_dbm", "phi_dbm", "uptilted_stations", "zero_mass_stations"):
        assert column in summary.columns
    # every tilt set is scored against the same equal mixture
    assert np.allclose(summary["phi_dbm"], 0.5 * summary["mean_ground_rss_dbm"] + 0.5 * summary["mean_uav_rss_dbm"], atol=1e-6)


def test_preset_writes_loadable_case_study(tmp_path):
    out = tmp_path / "case_study.yaml"
    assert cmd_preset("case_study", out) == 0
    assert load_config(out) == case_study_preset()


def test_preset_override(tmp_path):
    out = tmp_path / "ground_only.yaml"
    assert cmd_preset("case_study", out, ["alpha=1", "grid.resolution_ground=25"]) == 0
    scenario = load_config(out)
    assert scenario.alpha == 1.0
    assert scenario.grid.resolution_ground == 25.0


def test_main_dispatches_subcommands(scenario_file, tmp_path):
    assert main(["--log-level", "WARNING", "gradcheck", "--config", str(scenario_file), "--trials", "2"]) == 0
    out = tmp_path / "via-main"
    status = main(["optimize", "--config", str(scenario_file), "--out", str(out), "--override", "optimizer.eps2=1.0", "--threads", "2"])
    assert status == 0
    assert (out / "tilts.csv").is_file()


def test_main_requires_a_subcommand():
    with pytest.raises(SystemExit):
        main([])
