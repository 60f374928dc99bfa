"""Deterministic JSON, CSV and plain-table emitters.

JSON output has sorted keys and floats written with 17 significant digits,
so identical computations give byte-identical text. Complex numbers become
``[re, im]`` pairs and non-finite floats become ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, is_dataclass
from typing import Any, Iterable

import numpy as np

__all__ = ["SCHEMA", "CSV_COLUMNS", "to_jsonable", "dumps", "csv_rows", "format_csv",
           "format_table", "params_text"]

SCHEMA = 1
CSV_COLUMNS = ("params", "theorem", "closed_form", "sampled_sup", "gap", "violations_count")


def _float_text(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def to_jsonable(obj: Any) -> Any:
    """Reduce ``obj`` to dicts, lists, str, bool, int, float and None."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj: Any, indent: int, level: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, key in enumerate(sorted(obj)):
            out.append(f"{pad}{json.dumps(key)}: ")
            _emit(obj[key], indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(obj):
            out.append(pad)
            _emit(item, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float_text(obj))
    else:
        out.append(json.dumps(obj))


def dumps(obj: Any, indent: int = 2) -> str:
    """Canonical JSON text of ``obj`` (trailing newline included)."""
    out: list[str] = []
    _emit(to_jsonable(obj), indent, 0, out)
    return "".join(out) + "\n"


def params_text(config: dict) -> str:
    """Compact ``key=value`` rendering of a report's parameter block."""
    params = dict(config.get("params", {}))
    if "phi" in config:
        params["phi"] = config["phi"].get("label", config["phi"])
    for key in ("rho", "entry"):
        if key in config:
            params[key] = config[key]
    return ";".join(f"{k}={_cell(v)}" for k, v in params.items())


def _cell(v: Any) -> str:
    if isinstance(v, float):
        return _float_text(v) if math.isfinite(v) else "nan"
    return str(v)


def csv_rows(reports: Iterable) -> list[list[str]]:
    rows = []
    for rep in reports:
        d = to_jsonable(rep)
        rows.append([params_text(d["config"]), d["config"].get("theorem", ""),
                     _cell(d["closed_form"]), _cell(d["sampled_sup"]), _cell(d["gap"]),
                     str(d["violation_count"])])
    return rows


def format_csv(reports: Iterable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(csv_rows(reports))
    return buf.getvalue()


def format_table(rows: list[tuple[str, Any]]) -> str:
    """Two-column aligned text for ``(label, value)`` rows."""
    if not rows:
        return ""
    width = max(len(label) for label, _ in rows)
    lines = []
    for label, value in rows:
        if isinstance(value, float):
            value = _cell(value)
        lines.append(f"{label.ljust(width)}  {value}")
    return "\n".join(lines) + "\n"
