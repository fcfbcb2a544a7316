"""Utility functions for float formatting, list/range parsing and JSON coercion."""

import enum
import math
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from ineqcheck.exceptions import UsageError

# ---- Constants ----
FLOAT_SIGNIFICANT_DIGITS = 17
RANGE_SEPARATORS: Tuple[str, ...] = (":", ",")


def format_float(value: Optional[float]) -> Optional[float]:
    """
    Normalize a float for serialization.

    Non-finite values become None (JSON null); finite values are returned as
    plain Python floats, whose repr is the shortest string that round-trips
    (never more than 17 significant digits).
    """
    if value is None:
        return None
    x = float(value)
    if not math.isfinite(x):
        return None
    return x


def float_text(value: Optional[float]) -> str:
    """Text form of a float for CSV/table cells; empty for None or non-finite values."""
    x = format_float(value)
    return "" if x is None else repr(x)


def parse_float_list(raw: str, name: str) -> List[float]:
    """
    Parse a comma-separated list of floats, e.g. "1,2,3.5".

    Raises:
        UsageError: If the list is empty or an item is not a finite number.
    """
    items = [part.strip() for part in raw.split(",") if part.strip()]
    if not items:
        raise UsageError(f"--{name.replace('_', '-')} needs at least one value")
    values: List[float] = []
    for item in items:
        try:
            value = float(item)
        except ValueError:
            raise UsageError(f"--{name.replace('_', '-')}: {item!r} is not a number")
        if not math.isfinite(value):
            raise UsageError(f"--{name.replace('_', '-')}: {item!r} is not finite")
        values.append(value)
    return values


def parse_name_list(raw: str) -> List[str]:
    """Split a comma-separated list of identifiers, dropping blanks."""
    return [part.strip() for part in raw.split(",") if part.strip()]


def parse_range(raw: str, name: str) -> Tuple[float, float]:
    """
    Parse a closed range written "lo:hi" or "lo,hi".

    Raises:
        UsageError: If the text does not hold two numbers with lo <= hi.
    """
    for sep in RANGE_SEPARATORS:
        if sep in raw:
            parts = raw.split(sep)
            break
    else:
        parts = [raw]
    if len(parts) != 2:
        raise UsageError(f"--{name.replace('_', '-')} must look like LO:HI, got {raw!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"--{name.replace('_', '-')} must look like LO:HI, got {raw!r}")
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise UsageError(f"--{name.replace('_', '-')} needs finite LO <= HI, got {raw!r}")
    return lo, hi


def parse_bool(raw: str, name: str) -> bool:
    """Parse true/false style strings from run files."""
    text = raw.strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"{name} must be true or false, got {raw!r}")


def to_jsonable(value: Any) -> Any:
    """
    Recursively convert report values into JSON-compatible structures.

    NamedTuples become dicts in field order, Enums become their values,
    numpy scalars and arrays become Python numbers and lists, and
    non-finite floats become None.
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, enum.Enum):
        return to_jsonable(value.value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, tuple) and hasattr(value, "_asdict"):
        return {k: to_jsonable(v) for k, v in value._asdict().items()}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items: Sequence[Any] = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    return str(value)
