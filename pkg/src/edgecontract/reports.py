"""JSON and CSV emission with matching parsers.

CSV cells are typed on the way back in: empty is ``None``, ``true``/``false``
are booleans, then int, then float (``repr`` round-trips), else the string.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Mapping

import numpy as np

WALL_CLOCK_KEY = "wall_clock_s"


def jsonable(obj):
    """Plain-JSON copy: numpy scalars unwrapped, non-finite floats as ``None``."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def emit_json(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def parse_json(text: str):
    return json.loads(text)


def strip_wall_clock(obj):
    """Copy of a report dict without the wall-clock field, for comparisons."""
    if isinstance(obj, dict):
        return {k: strip_wall_clock(v) for k, v in obj.items() if k != WALL_CLOCK_KEY}
    if isinstance(obj, list):
        return [strip_wall_clock(v) for v in obj]
    return obj


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v!r} cannot be written to CSV")
        return repr(v)
    return str(v)


def _typed(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def emit_csv(rows: Iterable[Mapping], columns: list[str] | None = None) -> str:
    rows = list(rows)
    if columns is None:
        columns = []
        for r in rows:
            columns.extend(k for k in r if k not in columns)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader, None)
    if header is None:
        return []
    return [{k: _typed(v) for k, v in zip(header, row)} for row in reader]


RECORD_COLUMNS = [
    "guess", "E_guess", "lp_status", "opt_lp", "segment_start", "loop1_removed",
    "loop2_removed", "trials", "best_trial_g", "hard_failures", "unasserted_failures",
]


def record_rows(report: Mapping) -> list[dict]:
    """Flatten a run report's per-(guess, E_guess) records into CSV rows."""
    rows = []
    for rec in report["records"]:
        trials = rec.get("trials", [])
        gs = [t["g"] for t in trials if t["g"] is not None]
        rows.append({
            "guess": rec["guess"],
            "E_guess": rec["E_guess"],
            "lp_status": rec["lp_status"],
            "opt_lp": rec.get("opt_lp"),
            "segment_start": rec.get("segment_start"),
            "loop1_removed": rec.get("loop1_removed"),
            "loop2_removed": rec.get("loop2_removed"),
            "trials": len(trials),
            "best_trial_g": max(gs) if gs else None,
            "hard_failures": ";".join(rec.get("hard_failures", [])) or None,
            "unasserted_failures": ";".join(rec.get("unasserted_failures", [])) or None,
        })
    return rows
