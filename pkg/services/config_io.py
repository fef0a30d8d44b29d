"""
Scenario files: YAML parsing, dotted overrides, validation and canonical serialization
"""
import logging
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

import yaml
from pydantic import ValidationError

from models import FORMAT_VERSION, ScenarioConfig
from services.errors import ConfigParseError, ConfigValidationError

logger = logging.getLogger(__name__)


def _key_line(text: str, path: Sequence[Any]) -> Optional[int]:
    """1-based line of a dotted key path in the YAML text, when it can be located"""
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return None
    line = None
    for part in path:
        if isinstance(node, yaml.MappingNode):
            match = next(((k, v) for k, v in node.value if k.value == str(part)), None)
            if match is None:
                return line
            line = match[0].start_mark.line + 1
            node = match[1]
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int) and part < len(node.value):
            node = node.value[part]
            line = node.start_mark.line + 1
        else:
            return line
    return line


def _split_override(override: str) -> Tuple[List[str], Any]:
    if "=" not in override:
        raise ConfigParseError(f"override '{override}' is not KEY=VALUE")
    key, raw_value = override.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigParseError(f"override '{override}' has an empty key")
    try:
        value = yaml.safe_load(raw_value) if raw_value.strip() else None
    except yaml.YAMLError as e:
        raise ConfigParseError(f"override value for '{key}' is not a YAML scalar: {e}", field=key)
    return key.split("."), value


def apply_overrides(raw: dict, overrides: Sequence[str]) -> dict:
    """Set dotted paths (list items by index) on the raw mapping, in order"""
    for override in overrides:
        parts, value = _split_override(override)
        target: Any = raw
        for depth, part in enumerate(parts):
            last = depth == len(parts) - 1
            if isinstance(target, list):
                if not part.isdigit() or int(part) >= len(target):
                    raise ConfigParseError(f"override index '{part}' out of range", field=".".join(parts))
                if last:
                    target[int(part)] = value
                else:
                    target = target[int(part)]
            elif isinstance(target, dict):
                if last:
                    target[part] = value
                else:
                    if target.get(part) is None:
                        target[part] = {}
                    target = target[part]
            else:
                raise ConfigParseError(f"cannot descend into '{part}'", field=".".join(parts))
        logger.info(f"🔧 Override {'.'.join(parts)} = {value!r}")
    return raw


def _raise_validation(error: ValidationError, text: Optional[str]) -> None:
    first = error.errors()[0]
    loc = list(first.get("loc", ()))
    dotted = ".".join(str(p) for p in loc)
    kind = first.get("type")
    if kind == "extra_forbidden":
        line = _key_line(text, loc) if text else None
        raise ConfigParseError(f"unknown key '{loc[-1]}'", line=line, field=dotted)
    if kind == "scenario_invariant":
        ctx = first.get("ctx", {})
        field = ".".join([str(p) for p in loc] + [ctx.get("field", "")]).strip(".")
        raise ConfigValidationError(field, ctx.get("detail", first.get("msg", "")))
    raise ConfigValidationError(dotted or "scenario", first.get("msg", str(error)))


def validate_config(raw: Any, text: Optional[str] = None) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigParseError("scenario file must be a mapping at the top level")
    if "format_version" not in raw:
        raise ConfigValidationError("format_version", f"missing (current version is {FORMAT_VERSION})")
    try:
        return ScenarioConfig.model_validate(raw)
    except ValidationError as e:
        _raise_validation(e, text)


def parse_config(text: str, overrides: Sequence[str] = ()) -> ScenarioConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigParseError(
            f"invalid YAML: {problem}",
            line=mark.line + 1 if mark else None,
            column=mark.column + 1 if mark else None,
        )
    if overrides:
        if not isinstance(raw, dict):
            raise ConfigParseError("scenario file must be a mapping at the top level")
        raw = apply_overrides(raw, overrides)
    return validate_config(raw, text)


def serialize_config(config: ScenarioConfig) -> str:
    """Canonical YAML: model field order, no null entries"""
    data = config.model_dump(mode="python", exclude_none=True)
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=False)


def load_config(path: Path, overrides: Sequence[str] = ()) -> ScenarioConfig:
    path = Path(path)
    logger.info(f"📄 Loading scenario {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigParseError(f"cannot read {path}: {e}")
    return parse_config(text, overrides)


def write_config(config: ScenarioConfig, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_config(config), encoding="utf-8")
    logger.info(f"💾 Scenario written to {path}")
