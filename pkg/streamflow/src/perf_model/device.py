"""Device description files.

    device name=<id>
    dsp <int>
    bram <int>
    lut <int>
    clock_mhz <num>
    bandwidth_gbps <num>
    reconfig_ms <num>
    word_bits <int>
    lut_alpha <num>      (optional)
    lut_beta <num>       (optional)
"""

import logging
import math
from pathlib import Path

from pydantic import ValidationError

from streamflow.src.perf_model.exceptions import DeviceFileError, DeviceParseError
from streamflow.src.perf_model.schemas import DeviceDescriptor
from streamflow.src.utils import content_lines, read_text_file

logger = logging.getLogger(__name__)

DEVICE_KEYS: dict[str, tuple[str, type]] = {
    "dsp": ("dsp_capacity", int),
    "bram": ("bram_capacity", int),
    "lut": ("lut_capacity", int),
    "clock_mhz": ("clock_mhz", float),
    "bandwidth_gbps": ("mem_bandwidth_gbps", float),
    "reconfig_ms": ("reconfig_ms", float),
    "word_bits": ("word_bits", int),
    "lut_alpha": ("lut_alpha", float),
    "lut_beta": ("lut_beta", float),
}
OPTIONAL_KEYS = frozenset({"lut_alpha", "lut_beta"})


def _parse_value(line: int, key: str, raw: str, kind: type) -> int | float:
    try:
        value = kind(raw)
    except ValueError:
        raise DeviceParseError(line, f"{key} expects {'an integer' if kind is int else 'a number'}, got '{raw}'") from None
    if kind is float and not math.isfinite(value):
        raise DeviceParseError(line, f"{key} must be finite, got '{raw}'")
    return value


def parse_device(text: str) -> DeviceDescriptor:
    name: str | None = None
    fields: dict[str, int | float] = {}
    lines: dict[str, int] = {}
    last_line = 1

    for number, line in content_lines(text):
        last_line = number
        tokens = line.split()
        if tokens[0] == "device":
            if name is not None:
                raise DeviceParseError(number, "device line given twice")
            if len(tokens) != 2 or not tokens[1].startswith("name=") or tokens[1] == "name=":
                raise DeviceParseError(number, "expected 'device name=<id>'")
            name = tokens[1].removeprefix("name=")
            continue

        key = tokens[0]
        if key not in DEVICE_KEYS:
            raise DeviceParseError(number, f"unknown device key '{key}'")
        if len(tokens) != 2:
            raise DeviceParseError(number, f"expected '{key} <value>'")
        if key in lines:
            raise DeviceParseError(number, f"'{key}' already given on line {lines[key]}")
        field, kind = DEVICE_KEYS[key]
        fields[field] = _parse_value(number, key, tokens[1], kind)
        lines[key] = number

    if name is None:
        raise DeviceParseError(1, "missing 'device name=<id>' line")
    missing = [key for key in DEVICE_KEYS if key not in lines and key not in OPTIONAL_KEYS]
    if missing:
        raise DeviceParseError(last_line, f"device is missing {', '.join(missing)}")

    try:
        device = DeviceDescriptor(name=name, **fields)
    except ValidationError as e:
        error = e.errors()[0]
        field = error["loc"][0] if error["loc"] else None
        key = next((k for k, (f, _) in DEVICE_KEYS.items() if f == field), None)
        raise DeviceParseError(lines.get(key), f"{key or 'device'}: {error['msg']}") from e

    logger.debug("Parsed device %s", device.name)
    return device


def load_device(path: Path) -> DeviceDescriptor:
    return parse_device(read_text_file(Path(path), DeviceFileError))
