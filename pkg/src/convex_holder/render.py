"""Markdown, CSV and JSON rendering of result rows.

A row is an ordered mapping of column name to cell.  mpfr cells print at
the configured number of significant digits; in JSON they also get a
``<column>_hex`` companion holding the exact binary value.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpfr

from .numerics import format_real, real_to_hex

FORMATS = ("markdown", "csv", "json")


def _cell(value, digits: int) -> str:
    if isinstance(value, mpfr):
        return format_real(value, digits)
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value is None:
        return ""
    return str(value)


def _json_row(row: Mapping, digits: int) -> dict:
    out = {}
    for key, value in row.items():
        if isinstance(value, mpfr):
            out[key] = format_real(value, digits)
            out[f"{key}_hex"] = real_to_hex(value)
        elif isinstance(value, (bool, int, str, dict, list)) or value is None:
            out[key] = value
        else:
            out[key] = str(value)
    return out


def render(
    rows: Sequence[Mapping],
    fmt: str,
    digits: int,
    notes: Iterable[str] = (),
    meta: Mapping | None = None,
) -> str:
    notes = list(notes)
    if fmt == "json":
        document = {"rows": [_json_row(r, digits) for r in rows]}
        if meta:
            document = {**meta, **document}
        if notes:
            document["notes"] = notes
        return json.dumps(document, indent=2, ensure_ascii=False) + "\n"

    columns = list(rows[0].keys()) if rows else []
    table = [[_cell(r.get(c), digits) for c in columns] for r in rows]
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(table)
        return buffer.getvalue()
    if fmt != "markdown":
        raise ValueError(f"unknown format {fmt!r}")

    lines = ["| " + " | ".join(columns) + " |", "|" + "|".join("---" for _ in columns) + "|"]
    lines += ["| " + " | ".join(cells) + " |" for cells in table]
    if notes:
        lines.append("")
        lines += notes
    return "\n".join(lines) + "\n"
