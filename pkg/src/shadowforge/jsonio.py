"""Byte-stable JSON output: UTF-8, sorted keys, trailing newline."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

__all__ = ["json_bytes", "write_json"]


def json_bytes(payload: Any) -> bytes:
    return (json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n").encode(
        "utf-8"
    )


def write_json(path: Path | str, payload: Any) -> None:
    Path(path).write_bytes(json_bytes(payload))
