"""Tolerances, defaults and configuration-file loading for the inequality checker."""

import json
import logging
import math
import os
import re
from pathlib import Path
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, TypedDict

from typing_extensions import NotRequired

from ineqcheck.exceptions import ConfigError, UsageError

logger = logging.getLogger("ineqcheck")


class ToleranceSpec(NamedTuple):
    """Absolute/relative tolerance pair plus the quadrature subdivision budget."""

    atol: float
    rtol: float
    max_subdivisions: int = 4096

    def threshold(self, magnitude: float) -> float:
        """Return max(atol, rtol * |magnitude|)."""
        return max(self.atol, self.rtol * abs(magnitude))


DEFAULT_QUADRATURE_TOLERANCE = ToleranceSpec(atol=1e-12, rtol=1e-10, max_subdivisions=4096)
DEFAULT_VERDICT_TOLERANCE = ToleranceSpec(atol=1e-9, rtol=1e-8)
DEFAULT_CERTIFICATION_TOLERANCE = 1e-9

SEED_ENV_VAR = "INEQ_SEED"
ATOL_ENV_VAR = "INEQ_ATOL"
RTOL_ENV_VAR = "INEQ_RTOL"

# Keys accepted in a flat key=value run file; they mirror the long CLI flags.
RUN_FILE_KEYS = frozenset(
    {
        "fn",
        "class",
        "s",
        "a",
        "b",
        "p",
        "q",
        "atol",
        "rtol",
        "max_subdivisions",
        "seed",
        "trials",
        "format",
        "output",
        "workers",
        "p_grid",
        "q_grid",
        "s_grid",
        "classes",
        "diagonal",
        "p_range",
        "q_range",
        "s_range",
        "a_range",
        "width_range",
    }
)
_KEY_PATTERN = re.compile(r"^[a-z][a-z0-9_-]*$")


class SweepFileConfig(TypedDict):
    """Validated contents of a JSON sweep file."""

    functions: List[str]
    classes: List[str]
    p_grid: List[float]
    q_grid: List[float]
    s_grid: List[float]
    interval: List[float]
    diagonal: bool
    tolerance: NotRequired[Dict[str, float]]


def validate_tolerance(tol: ToleranceSpec) -> ToleranceSpec:
    """
    Check that a tolerance has positive components.

    Raises:
        UsageError: If atol, rtol or max_subdivisions is not positive.
    """
    if not (tol.atol > 0 and math.isfinite(tol.atol)):
        raise UsageError(f"Absolute tolerance must be positive, got {tol.atol!r}")
    if not (tol.rtol > 0 and math.isfinite(tol.rtol)):
        raise UsageError(f"Relative tolerance must be positive, got {tol.rtol!r}")
    if tol.max_subdivisions < 1:
        raise UsageError(
            f"max_subdivisions must be at least 1, got {tol.max_subdivisions!r}"
        )
    return tol


def default_seed(environ: Optional[Mapping[str, str]] = None) -> Optional[int]:
    """
    Read the default seed from INEQ_SEED.

    Returns:
        The seed as an integer, or None when the variable is unset or empty.

    Raises:
        UsageError: If the variable is set to something that is not an integer.
    """
    env = os.environ if environ is None else environ
    raw = env.get(SEED_ENV_VAR, "").strip()
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")


def tolerance_from_env(
    environ: Optional[Mapping[str, str]] = None,
    base: ToleranceSpec = DEFAULT_VERDICT_TOLERANCE,
) -> ToleranceSpec:
    """Apply INEQ_ATOL / INEQ_RTOL overrides to a base verdict tolerance."""
    env = os.environ if environ is None else environ
    atol, rtol = base.atol, base.rtol
    try:
        if env.get(ATOL_ENV_VAR):
            atol = float(env[ATOL_ENV_VAR])
        if env.get(RTOL_ENV_VAR):
            rtol = float(env[RTOL_ENV_VAR])
    except ValueError as e:
        raise UsageError(f"Invalid tolerance in environment: {e}")
    return validate_tolerance(base._replace(atol=atol, rtol=rtol))


def load_run_file(config_path: str) -> Dict[str, str]:
    """
    Load a flat key=value run file that mirrors the long CLI flags.

    Expected format::

        # verify exp against the convex bound
        fn = exp
        class = convex
        p = 1
        q = 1

    Keys may use hyphens or underscores. Blank lines and '#' comments are skipped.

    Returns:
        Dictionary mapping normalized keys (underscored) to raw string values.

    Raises:
        ConfigError: If the file is missing or has any malformed line or unknown
            key (every problem is reported at once).
    """
    config_file = Path(config_path)
    if not config_file.exists():
        raise ConfigError(f"Config file not found: {config_path}")

    try:
        lines = config_file.read_text().splitlines()
    except OSError as e:
        raise ConfigError(f"Error reading config file: {e}")

    errors: List[str] = []
    values: Dict[str, str] = {}

    for lineno, raw_line in enumerate(lines, start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            errors.append(f"• Line {lineno}: expected 'key = value', got {raw_line!r}")
            continue

        key, value = (part.strip() for part in line.split("=", 1))
        if not _KEY_PATTERN.match(key):
            errors.append(f"• Line {lineno}: invalid key {key!r}")
            continue

        key = key.replace("-", "_")
        if key not in RUN_FILE_KEYS:
            errors.append(
                f"• Line {lineno}: unknown key {key!r} "
                f"(allowed: {', '.join(sorted(RUN_FILE_KEYS))})"
            )
            continue
        if key in values:
            errors.append(f"• Line {lineno}: duplicate key {key!r}")
            continue
        if not value:
            errors.append(f"• Line {lineno}: empty value for {key!r}")
            continue

        values[key] = value

    if errors:
        error_count = len(errors)
        summary = f"Found {error_count} configuration error{'s' if error_count > 1 else ''} in {config_path}:\n\n"
        raise ConfigError(summary + "\n".join(errors))

    logger.debug("Loaded %d keys from run file %s", len(values), config_path)
    return values


def _number_list(
    name: str, raw: Any, errors: List[str], minimum: Optional[float] = None
) -> List[float]:
    if not isinstance(raw, list) or not raw:
        errors.append(f"• '{name}' must be a non-empty list of numbers")
        return []
    out: List[float] = []
    for item in raw:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            errors.append(f"• '{name}': {item!r} is not a number")
            continue
        value = float(item)
        if not math.isfinite(value) or (minimum is not None and value <= minimum):
            errors.append(f"• '{name}': {item!r} must be a finite number > {minimum}")
            continue
        out.append(value)
    return out


def load_sweep_file(config_path: str) -> SweepFileConfig:
    """
    Load and validate a JSON sweep file.

    Expected format::

        {
            "sweep": {
                "functions": ["exp", "x"],
                "classes": ["convex", "p"],
                "p_grid": [1, 2],
                "q_grid": [1, 2],
                "s_grid": [0.5],
                "interval": [0, 1],
                "diagonal": false,
                "tolerance": {"atol": 1e-9, "rtol": 1e-8}
            }
        }

    Function ids are checked against the catalog by the caller.

    Raises:
        ConfigError: If the file is unreadable or any field is invalid
            (comprehensive error list).
    """
    config_file = Path(config_path)
    if not config_file.exists():
        raise ConfigError(f"Config file not found: {config_path}")

    try:
        with open(config_file, "r") as f:
            config_data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in config file: {e}")
    except OSError as e:
        raise ConfigError(f"Error reading config file: {e}")

    if not isinstance(config_data, dict) or "sweep" not in config_data:
        raise ConfigError("Config file must contain a 'sweep' key")
    sweep = config_data["sweep"]
    if not isinstance(sweep, dict):
        raise ConfigError("'sweep' must be a dictionary")

    # Collect ALL errors instead of failing on the first one
    errors: List[str] = []

    functions = sweep.get("functions")
    if (
        not isinstance(functions, list)
        or not functions
        or not all(isinstance(f, str) and f for f in functions)
    ):
        errors.append("• 'functions' must be a non-empty list of function ids")
        functions = []

    classes = sweep.get("classes", ["convex"])
    if (
        not isinstance(classes, list)
        or not classes
        or not all(isinstance(c, str) for c in classes)
    ):
        errors.append("• 'classes' must be a non-empty list of class names")
        classes = []

    p_grid = _number_list("p_grid", sweep.get("p_grid", [1.0]), errors, minimum=0.0)
    q_grid = _number_list("q_grid", sweep.get("q_grid", [1.0]), errors, minimum=0.0)
    s_grid = _number_list("s_grid", sweep.get("s_grid", [1.0]), errors, minimum=0.0)
    if any(s > 1.0 for s in s_grid):
        errors.append("• 's_grid' values must lie in (0, 1]")

    interval = _number_list("interval", sweep.get("interval", [0.0, 1.0]), errors)
    if interval and (len(interval) != 2 or not 0.0 <= interval[0] < interval[1]):
        errors.append("• 'interval' must be [a, b] with 0 <= a < b")

    diagonal = sweep.get("diagonal", False)
    if not isinstance(diagonal, bool):
        errors.append("• 'diagonal' must be true or false")
        diagonal = False

    result: SweepFileConfig = {
        "functions": list(functions),
        "classes": list(classes),
        "p_grid": p_grid,
        "q_grid": q_grid,
        "s_grid": s_grid,
        "interval": interval,
        "diagonal": diagonal,
    }

    tolerance = sweep.get("tolerance")
    if tolerance is not None:
        if not isinstance(tolerance, dict) or not set(tolerance) <= {"atol", "rtol"}:
            errors.append("• 'tolerance' must be an object with 'atol' and/or 'rtol'")
        else:
            checked = {
                key: _number_list(key, [value], errors, minimum=0.0)
                for key, value in tolerance.items()
            }
            result["tolerance"] = {k: v[0] for k, v in checked.items() if v}

    unknown = set(sweep) - {
        "functions",
        "classes",
        "p_grid",
        "q_grid",
        "s_grid",
        "interval",
        "diagonal",
        "tolerance",
    }
    if unknown:
        logger.warning("Sweep config: ignoring unknown keys %s", ", ".join(sorted(unknown)))

    if errors:
        error_count = len(errors)
        error_summary = f"Found {error_count} configuration error{'s' if error_count > 1 else ''}:\n\n"
        raise ConfigError(error_summary + "\n".join(errors))

    return result
