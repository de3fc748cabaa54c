"""Deterministic JSON and CSV rendering."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from fractions import Fraction
from typing import Any, Sequence

import numpy as np


def _float(x: float) -> float | str:
    if x != x or x in (float("inf"), float("-inf")):
        return str(x)
    return float(f"{x:.12g}")


def plain(obj: Any) -> Any:
    """Convert a payload to JSON-ready values with floats at 12 significant digits."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else _float(float(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    return obj


def report(fmt: str, payload: Any, fields: Sequence[str] | None = None) -> bytes:
    """Render ``payload`` as JSON (any structure) or CSV (a list of rows)."""
    if fmt == "json":
        return (json.dumps(plain(payload), indent=2) + "\n").encode()
    if fmt == "csv":
        rows = [plain(r) for r in payload]
        if fields is None:
            if not rows:
                raise ValueError("CSV output of no rows needs explicit field names")
            fields = list(rows[0])
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
        return buf.getvalue().encode()
    raise ValueError(f"unknown format {fmt!r}")
