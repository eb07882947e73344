"""
Artifact emitters for the CLI.

JSON artifacts are written with sorted keys, two-space indentation and a
trailing newline so that repeated runs are byte-identical. Tables go through
pandas with a fixed column order.
"""
import json
import logging
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel

logger = logging.getLogger(__name__)


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


def render_json(payload: Any) -> str:
    """Canonical JSON text of a payload (pydantic model, dict or list)."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    elif isinstance(payload, list):
        payload = [p.model_dump(mode="json") if isinstance(p, BaseModel) else p for p in payload]
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _cell(value: Any) -> Any:
    # nested values become compact JSON inside a single cell
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return value


def payload_rows(payload: Any) -> List[Dict[str, Any]]:
    """
    Flatten a payload into table rows.

    A list becomes one row per item; a single payload becomes one row.
    Nested lists and dicts are stored as JSON cells.
    """
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    items = payload if isinstance(payload, list) else [payload]
    rows = []
    for item in items:
        if isinstance(item, BaseModel):
            item = item.model_dump(mode="json")
        rows.append({key: _cell(value) for key, value in item.items()})
    return rows


def render_csv(payload: Any, columns: Optional[Sequence[str]] = None) -> str:
    """
    CSV text of a payload.

    Args:
        payload: rows (list) or a single payload
        columns: column order; defaults to sorted keys of the first row

    Returns:
        CSV text with a header line
    """
    rows = payload_rows(payload)
    if columns is None:
        columns = sorted(rows[0]) if rows else []
    frame = pd.DataFrame(rows, columns=list(columns))
    return frame.to_csv(index=False, lineterminator="\n")


def render(payload: Any, output_format: str = OutputFormat.JSON, columns: Optional[Sequence[str]] = None) -> str:
    if output_format == OutputFormat.CSV:
        return render_csv(payload, columns)
    if output_format == OutputFormat.JSON:
        return render_json(payload)
    raise ValueError(f"unknown output format {output_format!r}")


def write_artifact(text: str, out: Optional[Path] = None) -> Dict[str, Any]:
    """
    Write an artifact to ``out`` or to stdout.

    Returns:
        Dict with the destination and size, for logging
    """
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        destination = "<stdout>"
    else:
        out = Path(out)
        if out.parent != Path(""):
            out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        destination = str(out)
    result = {"destination": destination, "size_bytes": len(text.encode("utf-8"))}
    logger.debug("wrote artifact %s", result)
    return result
