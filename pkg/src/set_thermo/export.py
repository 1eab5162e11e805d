"""Deterministic CSV/JSON writers shared by the command-line tools."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np


def format_value(x):
    """17 significant digits for floats, ``inf``/``-inf``/``nan`` literals."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    Path(path).write_text(csv_text(header, rows))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # strict JSON has no infinities; spell them out
        return x if math.isfinite(x) else format_value(x)
    return obj


def json_text(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    Path(path).write_text(json_text(obj))


def table_to_records(header, rows):
    return [dict(zip(header, (_jsonable(v) for v in row))) for row in rows]


def write_table(path, header, rows, fmt):
    """Write a table as CSV or as a JSON list of records."""
    rows = list(rows)
    if fmt == "csv":
        write_csv(path, header, rows)
    else:
        write_json(path, table_to_records(header, rows))
