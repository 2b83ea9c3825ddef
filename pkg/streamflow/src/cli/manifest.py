"""Run manifests and artifact output.

The descriptor embeds the manifest without timing, so identical runs produce
byte-identical descriptors; the timed manifest goes to ``<out>.manifest.json``.
"""

import logging
from datetime import datetime, timezone
from pathlib import Path

from pydantic import BaseModel

from streamflow import __version__
from streamflow.src.cli.schemas import InputDigest, ManifestCore, RunManifest
from streamflow.src.exceptions import FileAccessError
from streamflow.src.utils import sha256_digest

logger = logging.getLogger(__name__)


def file_digest(role: str, path: Path) -> InputDigest:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise FileAccessError(f"cannot read {path}: {e.strerror or e}") from e
    return InputDigest(role=role, file=path.name, sha256=sha256_digest(data))


def result_digest(result: BaseModel) -> str:
    return sha256_digest(result.model_dump_json().encode("utf-8"))


def build_manifest(inputs: list[InputDigest], seed: int, objective: str, result: BaseModel) -> ManifestCore:
    return ManifestCore(
        tool_version=__version__,
        inputs=tuple(inputs),
        seed=seed,
        objective=objective,
        result_digest=result_digest(result),
    )


def timed_manifest(core: ManifestCore, started_at: datetime, wall_clock_s: float) -> RunManifest:
    return RunManifest(
        **core.model_dump(),
        started_at=started_at.astimezone(timezone.utc).isoformat(),
        wall_clock_s=wall_clock_s,
    )


def manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise FileAccessError(f"cannot write {path}: {e.strerror or e}") from e


def write_artifacts(descriptor: BaseModel, manifest: RunManifest, out: Path | None) -> str | None:
    """Write descriptor and manifest under ``out``; without ``out`` return the descriptor text."""
    text = descriptor.model_dump_json(indent=2) + "\n"
    if out is None:
        logger.info("Run manifest: %s", manifest.model_dump_json())
        return text
    _write(out, text)
    _write(manifest_path(out), manifest.model_dump_json(indent=2) + "\n")
    logger.info("Wrote %s and %s", out, manifest_path(out))
    return None
