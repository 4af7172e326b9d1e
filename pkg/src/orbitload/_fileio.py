"""Atomic file writes and canonical JSON encoding.

All toolkit outputs go through these helpers so that (a) interrupted runs
never leave truncated artifacts and (b) identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any


def canonical_json(obj: Any) -> str:
    """Deterministic JSON text: sorted keys, compact separators, newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def pretty_json(obj: Any) -> str:
    """Deterministic human-readable JSON: sorted keys, 2-space indent."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    """Write ``data`` to ``path`` via a temp file + rename in the same dir."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def atomic_write_json(path: str | Path, obj: Any, *, pretty: bool = True) -> None:
    atomic_write_text(path, pretty_json(obj) if pretty else canonical_json(obj))
