"""
Scenario file loader.

Scenario files are UTF-8 text with one `key = value` per line. `#` starts a
comment, keys use dotted paths into ScenarioConfig (`track.spacing_m = 10`),
list values are comma-separated and missing keys keep their defaults.
Unknown keys are rejected.
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ValidationError

from models.errors import ConfigParseError
from models.simulation import ScenarioConfig
from utils.logger import get_logger

logger = get_logger(__name__)

# Keys whose value is a comma-separated list
LIST_KEYS = frozenset({"volume_m", "snr_grid_db"})

# Keys behind model-level checks, by pydantic error prefix ("" is the root)
CROSS_FIELD_KEYS = {
    "": ("volume_m", "track.x_start_m", "track.x_end_m", "track.spacing_m"),
    "track": ("track.x_start_m", "track.x_end_m", "track.spacing_m"),
    "channel": ("channel.source_level_db", "channel.detection_threshold_db"),
}


def known_keys() -> List[str]:
    """
    Dotted keys accepted in a scenario file.

    Returns:
        Sorted key list derived from the ScenarioConfig fields
    """
    keys = []
    for name, info in ScenarioConfig.model_fields.items():
        annotation = info.annotation
        if isinstance(annotation, type) and issubclass(annotation, BaseModel):
            keys.extend(f"{name}.{sub}" for sub in annotation.model_fields)
        else:
            keys.append(name)
    return sorted(keys)


def _split_line(raw: str, line_no: int) -> Optional[Tuple[str, str]]:
    """Strip comments and split a line into key and value."""
    text = raw.split("#", 1)[0].strip()
    if not text:
        return None
    if "=" not in text:
        raise ConfigParseError(f"expected 'key = value', got {text!r}", line=line_no)
    key, value = (part.strip() for part in text.split("=", 1))
    if not key:
        raise ConfigParseError("missing key before '='", line=line_no)
    if not value:
        raise ConfigParseError(f"missing value for '{key}'", key=key, line=line_no)
    return key, value


def _locate(loc: Tuple, key_lines: Dict[str, int]) -> Tuple[Optional[str], Optional[int]]:
    """
    Map a pydantic error location back to a file key and line.

    Checks spanning several fields report at a model prefix ("track") or at
    the root; those fall back to the last related key set in the file, or
    name all related keys when the file set none of them.
    """
    parts = [str(p) for p in loc if isinstance(p, str)]
    for size in range(len(parts), 0, -1):
        key = ".".join(parts[:size])
        if key in key_lines:
            return key, key_lines[key]

    prefix = ".".join(parts)
    related = CROSS_FIELD_KEYS.get(prefix)
    if related is None:
        related = tuple(k for k in known_keys() if k.startswith(f"{prefix}."))
    present = [k for k in related if k in key_lines]
    if present:
        key = max(present, key=key_lines.get)
        return key, key_lines[key]
    return (", ".join(related) or prefix or None), None


def parse_config_text(text: str, source: str = "<string>") -> ScenarioConfig:
    """
    Parse scenario text into a fully resolved configuration.

    Args:
        text: File contents
        source: Name used in log messages

    Returns:
        ScenarioConfig with defaults applied

    Raises:
        ConfigParseError: On unknown keys, duplicates, malformed values or
            constraint violations
    """
    accepted = set(known_keys())
    nested: Dict[str, Union[str, List[str], Dict]] = {}
    key_lines: Dict[str, int] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        parsed = _split_line(raw, line_no)
        if parsed is None:
            continue
        key, value = parsed
        if key not in accepted:
            raise ConfigParseError(f"unknown key '{key}'", key=key, line=line_no)
        if key in key_lines:
            raise ConfigParseError(
                f"duplicate key '{key}' (first set on line {key_lines[key]})", key=key, line=line_no
            )
        key_lines[key] = line_no

        # Values stay strings; pydantic does the numeric conversion
        converted = [item.strip() for item in value.split(",")] if key in LIST_KEYS else value
        head, _, tail = key.partition(".")
        if tail:
            nested.setdefault(head, {})[tail] = converted
        else:
            nested[head] = converted

    try:
        config = ScenarioConfig.model_validate(nested)
    except ValidationError as e:
        first = e.errors()[0]
        key, line = _locate(first["loc"], key_lines)
        label = f"{key}: " if key else ""
        raise ConfigParseError(f"{label}{first['msg']}", key=key, line=line) from None

    logger.debug(f"Parsed {len(key_lines)} key(s) from {source}")
    return config


def parse_config(path: Union[str, Path]) -> ScenarioConfig:
    """
    Read and parse a scenario file.

    Args:
        path: Scenario file path

    Returns:
        ScenarioConfig with defaults applied

    Raises:
        ConfigParseError: On parse or validation problems, or an unreadable file
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigParseError(f"cannot read {path}: {e}") from None
    logger.info(f"Loading scenario from {path}")
    return parse_config_text(text, source=str(path))
