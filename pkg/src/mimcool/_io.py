"""Deterministic CSV emission."""
from __future__ import annotations

import math
import numbers
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .params import CONFIG_KEYS, SystemParams


def format_float(x) -> str:
    """17 significant digits in scientific notation; lossless for doubles."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.16e}"


def format_cell(x) -> str:
    if isinstance(x, (bool, np.bool_, numbers.Integral)):
        return str(int(x))
    if isinstance(x, numbers.Real):
        return format_float(x)
    return "" if x is None else str(x)


def param_header(params: SystemParams) -> list[str]:
    lines = [f"# mimcool {__version__}"]
    lines += [f"# {k}={format_float(getattr(params, k))}" for k in CONFIG_KEYS]
    return lines


def write_csv(path: str | Path, header: list[str], columns: list[str], rows) -> None:
    """Write ``#`` header lines, a column row and data rows; ``"-"`` means stdout."""
    lines = [h if h.startswith("#") else f"# {h}" for h in header]
    lines.append(",".join(columns))
    lines += [",".join(format_cell(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
