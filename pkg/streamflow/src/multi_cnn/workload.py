"""Multi-CNN workload files.

    # one line per CNN; paths are relative to this file
    cnn file=alexnet.net weight=2 target_ms=5
    cnn file=lenet.net weight=1 target_ms=0.5
"""

import logging
import math
from pathlib import Path

from pydantic import ValidationError

from streamflow.src.exceptions import FileAccessError
from streamflow.src.model_ir.parser import load_network
from streamflow.src.multi_cnn.exceptions import InvalidWorkload, WorkloadParseError
from streamflow.src.multi_cnn.schemas import MultiCnnWorkload, WorkloadEntry
from streamflow.src.utils import content_lines, read_text_file

logger = logging.getLogger(__name__)

ENTRY_KEYS = ("file", "weight", "target_ms")


def _positive_number(line: int, key: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise WorkloadParseError(line, f"{key} must be a number, got '{raw}'") from None
    if not math.isfinite(value) or value <= 0:
        raise WorkloadParseError(line, f"{key} must be positive, got '{raw}'")
    return value


def _unique_name(stem: str, taken: set[str]) -> str:
    name, suffix = stem, 2
    while name in taken:
        name = f"{stem}-{suffix}"
        suffix += 1
    taken.add(name)
    return name


def load_workload(path: Path) -> MultiCnnWorkload:
    path = Path(path)
    text = read_text_file(path, FileAccessError)
    entries: list[WorkloadEntry] = []
    taken: set[str] = set()

    for number, line in content_lines(text):
        tokens = line.split()
        if tokens[0] != "cnn":
            raise WorkloadParseError(number, f"expected 'cnn file=<path> weight=<num> target_ms=<num>', got '{tokens[0]}'")
        fields: dict[str, str] = {}
        for token in tokens[1:]:
            key, sep, value = token.partition("=")
            if not sep or key not in ENTRY_KEYS:
                raise WorkloadParseError(number, f"unexpected field '{token}'")
            if key in fields:
                raise WorkloadParseError(number, f"'{key}' given twice")
            fields[key] = value
        missing = [key for key in ENTRY_KEYS if key not in fields]
        if missing:
            raise WorkloadParseError(number, f"cnn entry is missing {', '.join(missing)}")

        source = path.parent / fields["file"]
        network = load_network(source)
        entries.append(
            WorkloadEntry(
                name=_unique_name(network.name, taken),
                network=network,
                importance=_positive_number(number, "weight", fields["weight"]),
                target_latency_s=_positive_number(number, "target_ms", fields["target_ms"]) * 1e-3,
                source=source,
            )
        )

    try:
        workload = MultiCnnWorkload(entries=tuple(entries))
    except ValidationError as e:
        raise InvalidWorkload(f"{path}: {e.errors()[0]['msg']}") from e
    logger.info("Loaded workload %s with %d CNNs", path, len(workload.entries))
    return workload
