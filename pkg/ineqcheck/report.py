"""JSON, CSV and table rendering of verification reports, plus the exit-code contract."""

import csv
import io
import json
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ineqcheck.utils import float_text, to_jsonable
from ineqcheck.verifier import VerificationReport, Verdict, verdicts

# ---- Constants ----
OUTPUT_FORMATS: Tuple[str, ...] = ("json", "csv", "table")

EXIT_HOLDS = 0
EXIT_VIOLATED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3

CSV_COLUMNS: Tuple[str, ...] = (
    "function",
    "class",
    "formula_id",
    "a",
    "b",
    "p",
    "q",
    "s",
    "lhs",
    "lhs_error",
    "rhs",
    "rhs_error",
    "slack",
    "ratio",
    "verdict",
    "certified",
    "witness",
    "seed",
    "note",
)

_TABLE_COLUMNS: Tuple[Tuple[str, int], ...] = (
    ("function", 14),
    ("class", 18),
    ("formula_id", 34),
    ("p", 8),
    ("q", 8),
    ("lhs", 24),
    ("rhs", 24),
    ("ratio", 24),
    ("verdict", 12),
)


def report_to_dict(report: VerificationReport) -> Dict[str, Any]:
    """Report as a dict in the fixed key order of the JSON schema."""
    return {
        "problem": to_jsonable(report.problem),
        "class": report.class_label,
        "formula_id": report.formula_id,
        "lhs": to_jsonable(report.lhs),
        "lhs_error": to_jsonable(report.lhs_error),
        "rhs": to_jsonable(report.rhs),
        "rhs_error": to_jsonable(report.rhs_error),
        "slack": to_jsonable(report.slack),
        "ratio": to_jsonable(report.ratio),
        "verdict": report.verdict.value,
        "certifications": [to_jsonable(c.to_dict()) for c in report.certifications],
        "nonnegativity": (
            to_jsonable(report.nonnegativity.to_dict()) if report.nonnegativity is not None else None
        ),
        "beta_terms": [to_jsonable(t) for t in report.beta_terms],
        "seed": report.seed,
        "note": report.note,
    }


def exit_code_for(reports: Sequence[VerificationReport]) -> int:
    """0 if everything holds, 1 if anything is violated, else 2 for inconclusive results."""
    found = {r.verdict for r in reports}
    if Verdict.VIOLATED in found:
        return EXIT_VIOLATED
    if Verdict.INCONCLUSIVE in found:
        return EXIT_INCONCLUSIVE
    return EXIT_HOLDS


def summarize(reports: Sequence[VerificationReport]) -> Dict[str, Any]:
    counts = verdicts(reports)
    return {
        "total": len(reports),
        "holds": counts[Verdict.HOLDS.value],
        "violated": counts[Verdict.VIOLATED.value],
        "inconclusive": counts[Verdict.INCONCLUSIVE.value],
        "exit_code": exit_code_for(reports),
    }


def build_document(
    command: str,
    config: Dict[str, Any],
    reports: Sequence[VerificationReport],
    summary: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Top-level JSON document: {command, config, reports, summary}."""
    return {
        "command": command,
        "config": to_jsonable(config),
        "reports": [report_to_dict(r) for r in reports],
        "summary": to_jsonable(summary if summary is not None else summarize(reports)),
    }


def render_json(document: Dict[str, Any]) -> str:
    """
    Serialize with two-space indentation and insertion key order.

    Floats use repr (shortest round-trip form), non-finite values are null,
    so parsing and re-rendering the output reproduces it exactly.
    """
    return json.dumps(to_jsonable(document), indent=2, allow_nan=False) + "\n"


def _csv_row(report: VerificationReport) -> List[str]:
    problem = report.problem
    certified = ""
    witness = ""
    if report.certifications:
        cert = report.certifications[0]
        certified = "true" if cert.certified else "false"
        if cert.witness is not None:
            witness = " ".join(repr(float(v)) for v in cert.witness)
    return [
        str(problem.get("function", "")),
        report.class_label or "",
        report.formula_id,
        float_text(problem.get("a")),
        float_text(problem.get("b")),
        float_text(problem.get("p")),
        float_text(problem.get("q")),
        float_text(problem.get("s")),
        float_text(report.lhs),
        float_text(report.lhs_error),
        float_text(report.rhs),
        float_text(report.rhs_error),
        float_text(report.slack),
        float_text(report.ratio),
        report.verdict.value,
        certified,
        witness,
        "" if report.seed is None else str(report.seed),
        report.note or "",
    ]


def render_csv(reports: Sequence[VerificationReport]) -> str:
    """One row per report under the fixed CSV_COLUMNS header."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        writer.writerow(_csv_row(report))
    return buffer.getvalue()


def render_table(reports: Sequence[VerificationReport]) -> str:
    """Fixed-width plain-text table for terminals."""
    header = "  ".join(name.ljust(width) for name, width in _TABLE_COLUMNS)
    lines = [header, "-" * len(header)]
    for report in reports:
        row = _csv_row(report)
        cells = dict(zip(CSV_COLUMNS, row))
        lines.append(
            "  ".join(cells.get(name, "").ljust(width) for name, width in _TABLE_COLUMNS).rstrip()
        )
        if report.note:
            lines.append(f"    note: {report.note}")
    return "\n".join(lines) + "\n"


def render(
    fmt: str,
    command: str,
    config: Dict[str, Any],
    reports: Sequence[VerificationReport],
    summary: Optional[Dict[str, Any]] = None,
) -> str:
    if fmt == "json":
        return render_json(build_document(command, config, reports, summary))
    if fmt == "csv":
        return render_csv(reports)
    return render_table(reports)
