"""Location of the embedded data files (Kodaira catalog, golden tables)."""

from __future__ import annotations

import json
import os
from pathlib import Path

ENV_VAR = "K3FIX_DATA_DIR"
PACKAGE_DATA = Path(__file__).resolve().parent / "data"


class DataFileError(RuntimeError):
    """An embedded data file is missing or cannot be parsed."""


def data_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    return Path(override) if override else PACKAGE_DATA


def load_json(name: str, *, packaged: bool = False):
    """Parse a JSON data file; ``packaged`` ignores the directory override."""
    path = (PACKAGE_DATA if packaged else data_dir()) / name
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise DataFileError(f"missing data file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise DataFileError(f"corrupt data file {path}: {exc}") from exc
