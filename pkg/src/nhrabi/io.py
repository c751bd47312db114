"""CSV and JSON emission.

CSV files start with ``#`` comment lines (title, metadata, column units),
then a header row and data rows. Floats are written with ``repr`` so that
reading a file back and writing it again reproduces it byte for byte.
Missing values are empty fields, failed computations ``nan``.
JSON never contains NaN or infinities: such values become ``null``.
"""
from __future__ import annotations

import csv
import json
import math
import os
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

OUT_DIR_ENV = "NHRABI_OUT_DIR"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _parse(s: str):
    if s == "":
        return None
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def write_csv(
    path,
    columns: Mapping[str, Sequence],
    units: Mapping[str, str],
    title: str = "",
    meta: Mapping[str, Any] | None = None,
) -> Path:
    """Write equal-length ``columns``; every column needs an entry in ``units``."""
    path = Path(path)
    names = list(columns)
    missing = [n for n in names if n not in units]
    if missing:
        raise ValueError(f"no units given for columns {missing}")
    lengths = {len(columns[n]) for n in names}
    if len(lengths) > 1:
        raise ValueError(f"columns differ in length: {sorted(lengths)}")
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        if title:
            fh.write(f"# {title}\n")
        for k, v in (meta or {}).items():
            fh.write(f"# {k}: {v}\n")
        fh.write("# units: " + ", ".join(f"{n} [{units[n]}]" for n in names) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*(columns[n] for n in names)):
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path) -> tuple[list, dict]:
    """``(comment_lines, columns)`` with values parsed back to int/float/str/None."""
    comments = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("#") and not body:
            comments.append(line[1:].strip())
        else:
            body.append(line)
    rows = list(csv.reader(body))
    if not rows:
        return comments, {}
    names = rows[0]
    cols = {n: [] for n in names}
    for r in rows[1:]:
        for n, s in zip(names, r):
            cols[n].append(_parse(s))
    return comments, cols


def read_csv_units(path) -> dict:
    comments, _ = read_csv(path)
    for c in comments:
        if c.startswith("units:"):
            out = {}
            for item in c[len("units:"):].split(","):
                name, _, unit = item.strip().partition(" [")
                out[name] = unit.rstrip("]")
            return out
    return {}


def sanitize(obj):
    """Recursively replace non-finite floats with None and numpy scalars with Python ones."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return sanitize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, complex):
        return {"re": sanitize(obj.real), "im": sanitize(obj.imag)}
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(sanitize(obj), fh, indent=2, allow_nan=False)
        fh.write("\n")
    return path


def write_error_log(path, entries: Sequence[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{e}\n" for e in entries), encoding="utf-8")
    return path


def resolve_out_dir(flag: str | None, config_value: str | None = None, default: str = "nhrabi_out") -> Path:
    """``--out`` first, then the NHRABI_OUT_DIR environment variable, then the config file, then ``default``."""
    for cand in (flag, os.environ.get(OUT_DIR_ENV), config_value):
        if cand:
            return Path(cand)
    return Path(default)
