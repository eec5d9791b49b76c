"""
Row output for the command-line front end.

Rows are plain dicts. Numbers are formatted with a fixed number of
significant digits, in fixed notation inside [1e-6, 1e6) and scientific
notation outside, so the same rows always render to the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from collections.abc import Sequence
from typing import Any

from .models import OutputFormat, OutputSpec

__all__ = ["format_number", "render", "write_output"]

_FIXED_RANGE = (1e-6, 1e6)


def format_number(value: Any, precision: int = 12) -> str:
    """Format one cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        return "0"

    magnitude = abs(value)
    if _FIXED_RANGE[0] <= magnitude < _FIXED_RANGE[1]:
        decimals = max(0, precision - 1 - math.floor(math.log10(magnitude)))
        text = f"{value:.{decimals}f}"
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return text
    return f"{value:.{precision - 1}e}"


def _json_value(value: Any, precision: int) -> Any:
    if isinstance(value, float) and math.isfinite(value):
        return float(f"{value:.{precision}g}")
    if isinstance(value, float):
        return format_number(value, precision)
    return value


def _columns(rows: Sequence[dict[str, Any]], columns: Sequence[str] | None) -> list[str]:
    if columns is not None:
        return list(columns)
    seen: dict[str, None] = {}
    for row in rows:
        seen.update(dict.fromkeys(row))
    return list(seen)


def render(
    rows: Sequence[dict[str, Any]],
    spec: OutputSpec,
    columns: Sequence[str] | None = None,
    title: str | None = None,
) -> str:
    """
    Render rows in the requested format.

    Args:
        rows: One dict per row.
        spec: Format and precision.
        columns: Column order; defaults to first-seen key order.
        title: Heading line, used by the table format only.
    """
    names = _columns(rows, columns)
    precision = spec.precision

    if spec.format is OutputFormat.JSON:
        payload = [{name: _json_value(row.get(name), precision) for name in names} for row in rows]
        return json.dumps(payload, indent=2) + "\n"

    cells = [[format_number(row.get(name), precision) for name in names] for row in rows]
    if spec.format is OutputFormat.CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(names)
        writer.writerows(cells)
        return buffer.getvalue()

    widths = [max([len(name)] + [len(line[i]) for line in cells]) for i, name in enumerate(names)]
    lines = []
    if title:
        lines.append(title)
    lines.append("  ".join(name.rjust(width) for name, width in zip(names, widths)))
    lines.append("  ".join("-" * width for width in widths))
    for line in cells:
        lines.append("  ".join(cell.rjust(width) for cell, width in zip(line, widths)))
    return "\n".join(lines) + "\n"


def write_output(
    rows: Sequence[dict[str, Any]],
    spec: OutputSpec,
    columns: Sequence[str] | None = None,
    title: str | None = None,
) -> None:
    """Render rows and write them to spec.path, or to stdout when no path is set."""
    text = render(rows, spec, columns, title)
    if spec.path is None:
        sys.stdout.write(text)
    else:
        spec.path.write_text(text, encoding="utf-8")
