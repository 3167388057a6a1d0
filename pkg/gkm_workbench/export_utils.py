"""
Export utilities for the GKM workbench.

Tables are written as TSV through pandas and mirrored as JSON. Every write
goes to a temporary file first and is moved into place with ``os.replace``,
so an interrupted run never leaves a half-written golden file behind.
"""

import json
import os
import tempfile
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from .logging_utils import get_logger
from .path_utils import get_cache_dir

logger = get_logger()


def format_rational(value: Any) -> str:
    """Render an exact number as ``"p/q"`` (or ``"p"`` when integral)."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def to_plain(value: Any) -> Any:
    """Convert nested values to JSON-friendly types (Fractions become strings)."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        # numpy scalars
        return value.item()
    return value


def _atomic_write(path: str, writer) -> str:
    output_dir = os.path.dirname(path)
    if output_dir and not os.path.exists(output_dir):
        os.makedirs(output_dir, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=output_dir or ".", prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            writer(handle)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    return path


def rows_to_frame(rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None) -> pd.DataFrame:
    """Build a DataFrame of exact values rendered as strings.

    Args:
        rows: One dict per table row.
        columns: Column order; defaults to the keys of the first row.

    Returns:
        pandas.DataFrame: String-valued frame ready for TSV output.
    """
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    data = [{c: format_rational(row.get(c, "")) if not isinstance(row.get(c), (list, tuple))
             else ",".join(format_rational(x) for x in row.get(c))
             for c in columns} for row in rows]
    return pd.DataFrame(data, columns=columns)


def write_tsv(rows: Sequence[Dict[str, Any]], path: str, columns: Optional[List[str]] = None) -> str:
    """Write rows as a tab-separated golden file.

    Returns:
        str: The path written.
    """
    frame = rows_to_frame(rows, columns)
    _atomic_write(path, lambda handle: frame.to_csv(handle, sep="\t", index=False))
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_json(payload: Any, path: str) -> str:
    """Write a JSON document atomically.

    Returns:
        str: The path written.
    """
    _atomic_write(path, lambda handle: json.dump(to_plain(payload), handle, indent=2, sort_keys=False))
    logger.info(f"Wrote JSON to {path}")
    return path


def emit(rows: Sequence[Dict[str, Any]], output_dir: str, stem: str, fmt: str,
         columns: Optional[List[str]] = None, extra: Optional[Dict[str, Any]] = None) -> str:
    """Write a result table in the requested format (``tsv`` or ``json``).

    The JSON variant wraps the rows together with any ``extra`` payload.
    """
    if fmt == "json":
        payload = {"rows": list(rows)}
        if extra:
            payload.update(extra)
        return write_json(payload, os.path.join(output_dir, f"{stem}.json"))
    return write_tsv(rows, os.path.join(output_dir, f"{stem}.tsv"), columns)


def cache_path(name: str) -> str:
    """Path of a named cache entry inside the cache directory."""
    return os.path.join(get_cache_dir(), f"{name}.json")


def load_cached(name: str) -> Optional[Any]:
    """Load a cached enumeration, or None if absent or unreadable."""
    path = cache_path(name)
    if not os.path.exists(path):
        return None
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        logger.debug(f"Loaded cache entry {name}")
        return data
    except (OSError, json.JSONDecodeError) as e:
        logger.warning(f"Ignoring unreadable cache entry {name}", extra={"error": str(e)})
        return None


def save_cached(name: str, payload: Any) -> str:
    """Store an enumeration result in the cache directory."""
    return write_json(payload, cache_path(name))
