"""
`preset`: write a built-in scenario as an editable YAML file
"""
import argparse
import logging
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence

from commands.common import EXIT_OK, guarded
from models import ScenarioConfig
from services.config_io import apply_overrides, serialize_config, validate_config, write_config
from services.deployment import case_study_preset

logger = logging.getLogger(__name__)

PRESETS: Dict[str, Callable[[], ScenarioConfig]] = {
    "case_study": case_study_preset,
}


def build_preset(name: str, overrides: Sequence[str] = ()) -> ScenarioConfig:
    if name not in PRESETS:
        raise ValueError(f"Unknown preset '{name}' (available: {', '.join(sorted(PRESETS))})")
    scenario = PRESETS[name]()
    if overrides:
        raw = scenario.model_dump(mode="python", exclude_none=True)
        scenario = validate_config(apply_overrides(raw, overrides))
    return scenario


def cmd_preset(name: str, out_path: Optional[Path] = None, overrides: Sequence[str] = ()) -> int:
    def body() -> int:
        scenario = build_preset(name, overrides)
        if out_path is None:
            print(serialize_config(scenario), end="")
        else:
            write_config(scenario, Path(out_path))
        return EXIT_OK

    return guarded("preset", body)


def register(subparsers) -> None:
    parser = subparsers.add_parser("preset", help="Print or save a built-in scenario")
    parser.add_argument("name", choices=sorted(PRESETS), help="Preset name")
    parser.add_argument("--out", type=Path, default=None, help="Destination YAML (default: stdout)")
    parser.add_argument("--override", action="append", default=[], metavar="K=V", help="Dotted-path override (repeatable)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    return cmd_preset(args.name, args.out, args.override)
