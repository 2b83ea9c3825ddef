"""Optimizer settings from a ``key=value`` file.

    seed=7
    cooling_rate=0.9
    weight_folding=0.7
    weight_cut=0.2
    weight_mode=0.1

Keys not given fall back to the defaults in ``Settings``.
"""

import logging
from pathlib import Path

from pydantic import ValidationError

from streamflow.src.dse.enums import MoveKind
from streamflow.src.dse.exceptions import OptimizerConfigError
from streamflow.src.dse.schemas import OptimizerConfig
from streamflow.src.exceptions import FileAccessError
from streamflow.src.utils import content_lines, read_text_file

logger = logging.getLogger(__name__)

SCALAR_KEYS = (
    "seed",
    "initial_temperature",
    "cooling_rate",
    "iterations_per_temperature",
    "temperature_floor",
    "redraw_share",
    "max_partitions",
)
WEIGHT_KEYS = {f"weight_{kind.value}": kind for kind in MoveKind}


def parse_optimizer_config(text: str, **overrides) -> OptimizerConfig:
    """Parse a config file; ``overrides`` (e.g. a CLI ``seed``) win over file values."""
    values: dict = {}
    weights: dict[MoveKind, str] = {}
    lines: dict[str, int] = {}

    for number, line in content_lines(text):
        key, sep, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or not raw:
            raise OptimizerConfigError(number, f"expected key=value, got '{line}'")
        if key in lines:
            raise OptimizerConfigError(number, f"'{key}' already given on line {lines[key]}")
        if key in WEIGHT_KEYS:
            weights[WEIGHT_KEYS[key]] = raw
        elif key in SCALAR_KEYS:
            values[key] = raw
        else:
            raise OptimizerConfigError(number, f"unknown optimizer key '{key}'")
        lines[key] = number

    if weights:
        values["move_weights"] = {kind: weights.get(kind, 0.0) for kind in MoveKind}
    values.update({key: value for key, value in overrides.items() if value is not None})

    try:
        return OptimizerConfig(**values)
    except ValidationError as e:
        error = e.errors()[0]
        field = str(error["loc"][0]) if error["loc"] else ""
        line = lines.get(field)
        if field == "move_weights":
            line = min((lines[k] for k in WEIGHT_KEYS if k in lines), default=None)
        raise OptimizerConfigError(line, f"{field or 'config'}: {error['msg']}") from e


def load_optimizer_config(path: Path | None = None, **overrides) -> OptimizerConfig:
    if path is None:
        return parse_optimizer_config("", **overrides)
    text = read_text_file(Path(path), FileAccessError)
    config = parse_optimizer_config(text, **overrides)
    logger.info("Loaded optimizer config from %s", path)
    return config
