"""
Columnar CSV/JSON files written by the command-line tool.

Both formats carry the same table: an ordered list of column names and a
list of rows.  CSV has a header row, UTF-8, LF line endings.  JSON is
``{"columns": [...], "rows": [[...], ...]}``.  Reals are written with 17
significant digits so that reading a file gives back the exact values;
exact probabilities are ``decimal.Decimal`` and keep their printed digits.
"""

import json
import math
from decimal import Decimal
from pathlib import Path

__all__ = ["COLUMN_TYPES", "format_value", "dumps", "loads", "write_table", "read_table", "sidecar"]

COLUMN_TYPES = {
    "trial": int, "rank": int, "n": int, "M": int, "K": int, "count": int, "mc_trials": int,
    "p_exact": Decimal, "mean_exact": Decimal, "mean_closed_form": Decimal,
    "metric": str,
}


def _float_token(x, fmt):
    if math.isnan(x):
        return "NaN" if fmt == "json" else "nan"
    if math.isinf(x):
        sign = "-" if x < 0 else ""
        return sign + ("Infinity" if fmt == "json" else "inf")
    return format(x, ".17g")


def format_value(v, fmt="csv"):
    if v is None:
        return "null" if fmt == "json" else ""
    if isinstance(v, bool):
        raise TypeError("booleans are not a table type")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Decimal):
        return str(v)
    if isinstance(v, float):
        return _float_token(v, fmt)
    if isinstance(v, str):
        if fmt == "json":
            return json.dumps(v)
        if any(c in v for c in ',"\n'):
            raise ValueError(f"CSV string cell needs no quoting: {v!r}")
        return v
    return _float_token(float(v), fmt)


def _parse(token, column):
    if token is None or token == "":
        return None
    kind = COLUMN_TYPES.get(column, float)
    if kind is str:
        return token
    if kind is int:
        return int(token)
    if kind is Decimal:
        return Decimal(token)
    return float(token)


def dumps(columns, rows, fmt="csv"):
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(format_value(v, "csv") for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        body = ",\n  ".join("[" + ", ".join(format_value(v, "json") for v in row) + "]"
                            for row in rows)
        return '{"columns": %s,\n "rows": [\n  %s\n ]}\n' % (json.dumps(list(columns)), body)
    raise ValueError(f"unknown format {fmt!r}")


def loads(text, fmt="csv"):
    """Inverse of ``dumps``; returns ``(columns, rows)``."""
    if fmt == "csv":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines:
            raise ValueError("empty table")
        columns = lines[0].split(",")
        rows = []
        for lineno, line in enumerate(lines[1:], start=2):
            cells = line.split(",")
            if len(cells) != len(columns):
                raise ValueError(f"line {lineno}: expected {len(columns)} cells, got {len(cells)}")
            rows.append(tuple(_parse(c, col) for c, col in zip(cells, columns)))
        return columns, rows
    if fmt == "json":
        def keep(token):
            return token

        data = json.loads(text, parse_float=keep, parse_int=keep, parse_constant=keep)
        columns = data["columns"]
        rows = []
        for row in data["rows"]:
            if len(row) != len(columns):
                raise ValueError("row length does not match columns")
            rows.append(tuple(_parse(c if c is None else str(c), col)
                              for c, col in zip(row, columns)))
        return columns, rows
    raise ValueError(f"unknown format {fmt!r}")


def fmt_of(path):
    return "json" if Path(path).suffix == ".json" else "csv"


def write_table(path, columns, rows, fmt=None):
    path = Path(path)
    fmt = fmt or fmt_of(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(columns, rows, fmt))
    return path


def read_table(path, fmt=None):
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        return loads(fh.read(), fmt or fmt_of(path))


def sidecar(path, tag):
    """``run.csv`` -> ``run.<tag>.csv``."""
    path = Path(path)
    return path.with_name(f"{path.stem}.{tag}{path.suffix}")
