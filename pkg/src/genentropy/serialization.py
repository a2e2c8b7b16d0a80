"""Deterministic text output: JSON with sorted keys and CSV, floats at 17 significant digits.

The stdlib json module always writes the shortest round-trip repr for floats,
so numbers are formatted here and everything else is delegated to it.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Sequence

import numpy as np


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj: Any, indent: int | None = 2) -> str:
    return "".join(_encode(obj, indent, 0))


def _encode(obj: Any, indent: int | None, level: int):
    if isinstance(obj, (bool, np.bool_)):
        yield "true" if obj else "false"
    elif obj is None:
        yield "null"
    elif isinstance(obj, (int, np.integer)):
        yield str(int(obj))
    elif isinstance(obj, (float, np.floating)):
        yield format_float(float(obj))
    elif isinstance(obj, str):
        yield json.dumps(obj)
    elif isinstance(obj, dict):
        if not obj:
            yield "{}"
            return
        items = sorted((str(k), v) for k, v in obj.items())
        yield "{"
        for i, (k, v) in enumerate(items):
            yield ("," if i else "") + _newline(indent, level + 1) + json.dumps(k) + ": "
            yield from _encode(v, indent, level + 1)
        yield _newline(indent, level) + "}"
    elif isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            yield "[]"
            return
        yield "["
        for i, v in enumerate(obj):
            yield ("," if i else "") + _newline(indent, level + 1)
            yield from _encode(v, indent, level + 1)
        yield _newline(indent, level) + "]"
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _newline(indent: int | None, level: int) -> str:
    return "" if indent is None else "\n" + " " * (indent * level)


def _cell(v: Any) -> Any:
    if isinstance(v, (float, np.floating)):
        return format_float(float(v)).strip('"')
    return v


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()
