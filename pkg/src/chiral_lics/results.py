"""Columnar run output with deterministic CSV and JSON serialization.

CSV: header on the first line, floats with 12 significant digits, LF line
endings, and the metadata appended as trailing ``# key: <json>`` lines.
JSON: one document ``{"meta": ..., "columns": [...], "rows": [[...], ...]}``
with floats written as round-trip-exact IEEE-754 doubles (NaN as null).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

FORMATS = ("csv", "json")


def _plain(value: Any) -> Any:
    """numpy scalars/arrays -> plain Python, non-finite floats -> None (JSON only)."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (complex, np.complexfloating)):
        return [_plain(value.real), _plain(value.imag)]
    return value


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _parse_cell(text: str) -> Any:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class ScanResult:
    meta: dict
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValueError(f"row {i} has {len(row)} cells for {len(self.columns)} columns")

    def column(self, name: str) -> np.ndarray:
        k = self.columns.index(name)
        return np.array([r[k] for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_format_cell(v) for v in row])
        for key, value in self.meta.items():
            buf.write(f"# {key}: {json.dumps(_plain(value), sort_keys=True)}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"meta": _plain(self.meta), "columns": list(self.columns), "rows": _plain(self.rows)}
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"

    def dumps(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")

    def write(self, path: str | Path, fmt: str):
        Path(path).write_bytes(self.dumps(fmt).encode("utf-8"))

    @classmethod
    def from_csv(cls, text: str) -> "ScanResult":
        lines = text.split("\n")
        body = [ln for ln in lines if ln and not ln.startswith("# ")]
        meta = {}
        for ln in lines:
            if ln.startswith("# "):
                key, _, value = ln[2:].partition(": ")
                meta[key] = json.loads(value)
        reader = csv.reader(body)
        columns = next(reader)
        rows = [[_parse_cell(c) for c in row] for row in reader]
        return cls(meta, columns, rows)

    @classmethod
    def from_json(cls, text: str) -> "ScanResult":
        doc = json.loads(text)
        rows = [[math.nan if v is None else v for v in row] for row in doc["rows"]]
        return cls(doc["meta"], doc["columns"], rows)

    @classmethod
    def read(cls, path: str | Path, fmt: str | None = None) -> "ScanResult":
        path = Path(path)
        fmt = fmt or ("json" if path.suffix == ".json" else "csv")
        text = path.read_bytes().decode("utf-8")
        return cls.from_json(text) if fmt == "json" else cls.from_csv(text)
