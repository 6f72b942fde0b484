"""Render flat tables as aligned text, CSV or JSON.

CSV and JSON carry full-precision values (``repr`` of floats) so both
encodings hold identical numbers; the text table rounds for reading.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Sequence

FORMATS = ("table", "csv", "json")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else ("inf" if value > 0 else "-inf" if value < 0 else "nan")
    return str(value)


def _pretty(value: Any) -> str:
    if isinstance(value, float) and not isinstance(value, bool) and math.isfinite(value):
        return f"{value:.6g}"
    return _cell(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return _cell(value)
    return value


def render(columns: Sequence[str], rows: Sequence[dict], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(c)) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "columns": list(columns),
            "rows": [{c: _json_value(row.get(c)) for c in columns} for row in rows],
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt == "table":
        cells = [[_pretty(row.get(c)) for c in columns] for row in rows]
        widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        for r in cells:
            lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
