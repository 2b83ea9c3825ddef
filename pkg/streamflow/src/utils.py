import hashlib
from pathlib import Path
from typing import Iterator

from streamflow.src.exceptions import FileAccessError, InputError


def read_text_file(path: Path, error_cls: type[FileAccessError] = FileAccessError) -> str:
    """Read a UTF-8 input file, mapping OS failures onto ``error_cls``."""
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InputError(f"{path} is not valid UTF-8") from e
    except OSError as e:
        raise error_cls(f"cannot read {path}: {e.strerror or e}") from e


def content_lines(text: str) -> Iterator[tuple[int, str]]:
    """Yield (line number, stripped line), skipping blank and '#' comment lines."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def sha256_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
