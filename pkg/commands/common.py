"""
Helpers shared by the CLI subcommands
"""
import argparse
import logging
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import settings
from models import ScenarioConfig
from services.config_io import load_config
from services.errors import CorridorTiltError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CAP = 2


def add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, type=Path, help="Scenario YAML file")
    parser.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="K=V",
        help="Dotted-path override applied before validation (repeatable), e.g. optimizer.seed=7",
    )
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (default: CORRIDOR_TILT_THREADS or all cores)")
    parser.add_argument("--seed", type=int, default=None, help="Overrides optimizer.seed")


def resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        return settings.default_threads()
    if threads < 1:
        logger.warning(f"⚠️ --threads {threads} is not positive, using 1")
        return 1
    return threads


def load_scenario(config_path: Path, overrides: Sequence[str], seed: Optional[int] = None) -> ScenarioConfig:
    overrides = list(overrides)
    if seed is not None:
        overrides.append(f"optimizer.seed={seed}")
    return load_config(config_path, overrides)


def guarded(name: str, body: Callable[[], int]) -> int:
    """Run a subcommand body, mapping failures to exit status 1"""
    try:
        return body()
    except CorridorTiltError as e:
        logger.error(f"❌ {name} failed: {e}")
        return EXIT_ERROR
    except Exception as e:
        logger.error(f"❌ {name} failed unexpectedly: {e}")
        logger.exception("Full traceback:")
        return EXIT_ERROR


def prepare_out_dir(out_dir: Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def overrides_with(overrides: Sequence[str], *extra: str) -> List[str]:
    return [*overrides, *extra]
