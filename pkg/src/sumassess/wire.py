"""Line-delimited JSON wire helpers and atomic file writes.

Every file the toolkit produces is written to a temporary file in the target
directory and atomically renamed, so a failing command never leaves a partial
output behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Any


def read_jsonl(path: str | Path, error_cls: type[Exception]) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yield (line_number, object) for each non-blank line of a JSONL file.

    Malformed lines raise error_cls with the file name and 1-based line number.
    """
    path = Path(path)
    if not path.exists():
        raise error_cls(f"missing file: {path}")
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise error_cls(f"{path}:{lineno}: malformed record: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise error_cls(f"{path}:{lineno}: expected an object, got {type(obj).__name__}")
            yield lineno, obj


def canonical_json(obj: Any) -> str:
    """Serialize with sorted keys and fixed separators for byte-stable output."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write text to path via a same-directory temp file and atomic rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def write_jsonl_atomic(path: str | Path, objects: Iterable[dict[str, Any]]) -> int:
    """Write one canonical JSON object per line. Returns the number of lines."""
    lines = [canonical_json(obj) for obj in objects]
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))
    return len(lines)
