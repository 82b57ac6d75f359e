"""Deterministic text output: JSON with fixed float formatting, CSV tables."""

from __future__ import annotations

import enum
import json
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np

MACHINE_DIGITS = 17
HUMAN_DIGITS = 6


def fmt_float(x: float, digits: int = MACHINE_DIGITS) -> str:
    if not math.isfinite(x):
        return "null"
    text = f"{x + 0.0:.{digits}g}"  # folds -0.0 into 0.0
    if "e" not in text and "." not in text and "inf" not in text:
        text += ".0"
    return text


def to_plain(obj: Any) -> Any:
    """Convert numpy scalars/arrays, enums, tuples and dataclass-likes to JSON types."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj: Any, indent: int = 2, digits: int = MACHINE_DIGITS) -> str:
    """JSON text with every float at ``digits`` significant digits."""

    def emit(v, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if v is None:
            return "null"
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, int):
            return str(v)
        if isinstance(v, float):
            return fmt_float(v, digits)
        if isinstance(v, str):
            return json.dumps(v)
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {emit(x, level + 1)}" for k, x in v.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(v, list):
            if not v:
                return "[]"
            if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
                return "[" + ", ".join(emit(x, level) for x in v) + "]"
            return "[\n" + ",\n".join(pad + emit(x, level + 1) for x in v) + "\n" + end + "]"
        raise TypeError(f"cannot serialize {type(v).__name__}")

    return emit(to_plain(obj), 0) + "\n"


def write_json(path: Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def write_csv(path: Path, header: Sequence[str], rows) -> None:
    """Comma-separated table; floats at 17 significant digits."""

    def cell(v):
        v = to_plain(v)
        if isinstance(v, float):
            return fmt_float(v).replace("null", "nan")
        return "" if v is None else str(v)

    lines = [",".join(header)]
    lines += [",".join(cell(v) for v in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
