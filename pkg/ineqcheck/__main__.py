#!/usr/bin/env python3
"""
Command-line entry point for the inequality checker.

Usage:
    python -m ineqcheck verify   --fn exp --class convex --a 0 --b 1 --p 1 --q 1 --format json
    python -m ineqcheck identity --fn const1 --a 0 --b 1 --p 1 --q 1
    python -m ineqcheck sweep    --fn x,exp --classes convex,p --p-grid 1,2 --q-grid 1,2
    python -m ineqcheck falsify  --class convex --trials 200 --seed 42
    python -m ineqcheck catalog
    python -m ineqcheck serve    -p 8000

Exit codes: 0 every check holds, 1 something is violated, 2 something is
inconclusive (and nothing violated), 3 usage, domain or configuration error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, NoReturn, Optional, Tuple

import uvicorn

from ineqcheck.config import (
    DEFAULT_QUADRATURE_TOLERANCE,
    DEFAULT_VERDICT_TOLERANCE,
    ToleranceSpec,
    default_seed,
    load_run_file,
    load_sweep_file,
    validate_tolerance,
)
from ineqcheck.exceptions import IneqCheckError, UsageError
from ineqcheck.function_catalog import ClassKind, ConvexityClass, builtin_catalog, catalog_lookup
from ineqcheck.quadrature import IntegralProblem
from ineqcheck.report import (
    EXIT_HOLDS,
    EXIT_INCONCLUSIVE,
    EXIT_USAGE,
    EXIT_VIOLATED,
    OUTPUT_FORMATS,
    exit_code_for,
    render,
)
from ineqcheck.utils import parse_bool, parse_float_list, parse_name_list, parse_range
from ineqcheck.verifier import (
    ProblemTemplate,
    SweepConfig,
    check_identity,
    falsify,
    sweep,
    verify,
)

logger = logging.getLogger("ineqcheck")

COMMANDS = ("verify", "identity", "sweep", "falsify", "catalog", "serve")

# Run-file keys whose argparse destination differs from the key.
_DEST_FOR_KEY = {"class": "cls", "fn": "fn"}

_CONVERTERS: Dict[str, Callable[[str], Any]] = {
    "a": float,
    "b": float,
    "p": float,
    "q": float,
    "s": float,
    "atol": float,
    "rtol": float,
    "max_subdivisions": int,
    "seed": int,
    "trials": int,
    "workers": int,
}

_DEFAULTS: Dict[str, Any] = {
    "a": 0.0,
    "b": 1.0,
    "p": 1.0,
    "q": 1.0,
    "format": "table",
    "trials": 200,
    "workers": 1,
    "diagonal": False,
}


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports bad flags as UsageError (exit 3) instead of exiting 2."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _common_options() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--config", help="Flat key=value run file mirroring the long flags.")
    common.add_argument(
        "--format",
        choices=OUTPUT_FORMATS,
        default=None,
        help="Report format (default: table).",
    )
    common.add_argument("--output", help="Write the report to this file instead of stdout.")
    common.add_argument("--atol", type=float, default=None, help="Absolute verdict tolerance (default: 1e-9).")
    common.add_argument("--rtol", type=float, default=None, help="Relative verdict tolerance (default: 1e-8).")
    common.add_argument(
        "--max-subdivisions",
        type=int,
        default=None,
        help="Quadrature subdivision budget (default: 4096).",
    )
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    verbosity.add_argument("--quiet", action="store_true", help="Only log warnings and errors.")
    return common


def _add_problem_options(parser: argparse.ArgumentParser, fn_help: str) -> None:
    parser.add_argument("--fn", help=fn_help)
    parser.add_argument("--a", type=float, default=None, help="Left endpoint (default: 0).")
    parser.add_argument("--b", type=float, default=None, help="Right endpoint (default: 1).")


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per operation."""
    common = _common_options()
    parser = _ArgumentParser(
        prog="ineqcheck",
        description="Numerical verification of weighted-product integral inequalities.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p_verify = sub.add_parser("verify", parents=[common], help="Check one class bound.")
    _add_problem_options(p_verify, "Catalog function id.")
    p_verify.add_argument("--class", dest="cls", help="s-convex, convex, quasi, p or q.")
    p_verify.add_argument("--s", type=float, default=None, help="Exponent for class s-convex.")
    p_verify.add_argument("--p", type=float, default=None, help="Left weight exponent (default: 1).")
    p_verify.add_argument("--q", type=float, default=None, help="Right weight exponent (default: 1).")

    p_identity = sub.add_parser(
        "identity", parents=[common], help="Compare the integral with its substituted form."
    )
    _add_problem_options(p_identity, "Catalog function id.")
    p_identity.add_argument("--p", type=float, default=None, help="Left weight exponent (default: 1).")
    p_identity.add_argument("--q", type=float, default=None, help="Right weight exponent (default: 1).")

    p_sweep = sub.add_parser("sweep", parents=[common], help="Verify over a parameter grid.")
    _add_problem_options(p_sweep, "Comma-separated catalog function ids.")
    p_sweep.add_argument("--classes", help="Comma-separated class names (default: convex).")
    p_sweep.add_argument("--p-grid", help="Comma-separated p values (default: 1).")
    p_sweep.add_argument("--q-grid", help="Comma-separated q values (default: 1).")
    p_sweep.add_argument("--s-grid", help="Comma-separated s values for s-convex (default: 1).")
    p_sweep.add_argument(
        "--diagonal", action="store_const", const=True, default=None, help="Only use p = q pairs."
    )
    p_sweep.add_argument("--sweep-config", help="JSON sweep file.")
    p_sweep.add_argument("--workers", type=int, default=None, help="Worker threads (default: 1).")

    p_falsify = sub.add_parser(
        "falsify", parents=[common], help="Random counterexample search for one class."
    )
    p_falsify.add_argument("--class", dest="cls", help="s-convex, convex, quasi, p or q.")
    p_falsify.add_argument(
        "--s", type=float, default=None, help="Fix s for s-convex (default: drawn from --s-range)."
    )
    p_falsify.add_argument("--trials", type=int, default=None, help="Number of trials (default: 200).")
    p_falsify.add_argument("--seed", type=int, default=None, help="Master seed (default: $INEQ_SEED or 0).")
    p_falsify.add_argument("--workers", type=int, default=None, help="Worker threads (default: 1).")
    for name in ("a-range", "width-range", "p-range", "q-range", "s-range"):
        p_falsify.add_argument(f"--{name}", help=f"Sampling range LO:HI for {name.split('-')[0]}.")
    p_falsify.add_argument(
        "--all-reports", action="store_true", help="Emit every trial report, not only violations."
    )

    p_catalog = sub.add_parser("catalog", parents=[common], help="List the built-in functions.")
    p_catalog.add_argument("--a", type=float, default=None, help="Left endpoint (default: 0).")
    p_catalog.add_argument("--b", type=float, default=None, help="Right endpoint (default: 1).")

    p_serve = sub.add_parser("serve", help="Run the HTTP service.")
    p_serve.add_argument("-p", "--port", type=int, default=8000, help="Port to bind to (default: 8000).")
    p_serve.add_argument("-b", "--bind", default="127.0.0.1", help="Address to bind to (default: 127.0.0.1).")
    p_serve.add_argument("--reload", action="store_true", help="Enable auto-reload for development.")
    p_serve.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    p_serve.add_argument("--quiet", action="store_true", help="Only log warnings and errors.")

    return parser


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Returns:
        Parsed arguments namespace.

    Raises:
        UsageError: For unknown flags or malformed values.
    """
    return build_parser().parse_args(argv)


def resolve_options(args: argparse.Namespace) -> argparse.Namespace:
    """
    Fill unset options from the run file, INEQ_SEED and the built-in defaults.

    Explicit flags always win over the run file, which wins over defaults.
    """
    if getattr(args, "config", None):
        for key, raw in load_run_file(args.config).items():
            dest = _DEST_FOR_KEY.get(key, key)
            if not hasattr(args, dest) or getattr(args, dest) not in (None, False):
                continue
            convert = _CONVERTERS.get(key)
            try:
                if key == "diagonal":
                    value: Any = parse_bool(raw, key)
                else:
                    value = convert(raw) if convert else raw
            except ValueError:
                raise UsageError(f"Run file value for {key!r} is invalid: {raw!r}")
            setattr(args, dest, value)

    args.explicit = frozenset(
        dest for dest, value in vars(args).items() if value is not None and value is not False
    )
    for dest, value in _DEFAULTS.items():
        if hasattr(args, dest) and getattr(args, dest) is None:
            setattr(args, dest, value)

    if hasattr(args, "seed") and args.seed is None:
        seed = default_seed()
        args.seed = 0 if seed is None else seed
    if getattr(args, "format", None) not in OUTPUT_FORMATS:
        raise UsageError(f"--format must be one of {', '.join(OUTPUT_FORMATS)}, got {args.format!r}")
    return args


def _tolerances(args: argparse.Namespace) -> Tuple[ToleranceSpec, ToleranceSpec]:
    verdict = DEFAULT_VERDICT_TOLERANCE
    verdict = verdict._replace(
        atol=verdict.atol if args.atol is None else args.atol,
        rtol=verdict.rtol if args.rtol is None else args.rtol,
    )
    quad = DEFAULT_QUADRATURE_TOLERANCE
    if args.max_subdivisions is not None:
        quad = quad._replace(max_subdivisions=args.max_subdivisions)
    return validate_tolerance(verdict), validate_tolerance(quad)


def _tolerance_config(verdict: ToleranceSpec, quad: ToleranceSpec) -> Dict[str, Any]:
    return {"atol": verdict.atol, "rtol": verdict.rtol, "max_subdivisions": quad.max_subdivisions}


def _require(args: argparse.Namespace, dest: str, flag: str) -> Any:
    value = getattr(args, dest, None)
    if value is None or value == "":
        raise UsageError(f"{args.command} needs {flag}")
    return value


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_verify(args: argparse.Namespace) -> Tuple[str, int]:
    fn = _require(args, "fn", "--fn")
    cls = ConvexityClass.parse(_require(args, "cls", "--class"), args.s)
    verdict_tol, quad_tol = _tolerances(args)
    spec = catalog_lookup(fn, args.a, args.b)
    problem = IntegralProblem(args.a, args.b, args.p, args.q, spec)
    logger.info("Verifying %s against the %s bound", fn, cls.label)
    report = verify(spec, cls, problem, tol=verdict_tol, quad_tol=quad_tol)

    config = {"fn": fn, "class": cls.kind.value, "s": cls.s, "a": args.a, "b": args.b, "p": args.p, "q": args.q}
    config.update(_tolerance_config(verdict_tol, quad_tol))
    return render(args.format, "verify", config, [report]), exit_code_for([report])


def _cmd_identity(args: argparse.Namespace) -> Tuple[str, int]:
    fn = _require(args, "fn", "--fn")
    verdict_tol, quad_tol = _tolerances(args)
    spec = catalog_lookup(fn, args.a, args.b)
    logger.info("Checking the change-of-variables identity for %s", fn)
    report = check_identity(IntegralProblem(args.a, args.b, args.p, args.q, spec), verdict_tol, quad_tol)

    config = {"fn": fn, "a": args.a, "b": args.b, "p": args.p, "q": args.q}
    config.update(_tolerance_config(verdict_tol, quad_tol))
    return render(args.format, "identity", config, [report]), exit_code_for([report])


def _parse_classes(names: List[str]) -> List[ClassKind]:
    kinds = []
    for name in names:
        try:
            kinds.append(ClassKind(name.strip().lower()))
        except ValueError:
            raise UsageError(
                f"Unknown class {name!r} (choose from: {', '.join(k.value for k in ClassKind)})"
            )
    return kinds


def _cmd_sweep(args: argparse.Namespace) -> Tuple[str, int]:
    verdict_tol, quad_tol = _tolerances(args)
    file_config: Dict[str, Any] = load_sweep_file(args.sweep_config) if args.sweep_config else {}  # type: ignore[assignment]

    functions = parse_name_list(args.fn) if args.fn else file_config.get("functions", [])
    if not functions:
        raise UsageError("sweep needs at least one function (--fn or a sweep file)")
    classes = _parse_classes(
        parse_name_list(args.classes) if args.classes else file_config.get("classes", ["convex"])
    )
    p_grid = parse_float_list(args.p_grid, "p_grid") if args.p_grid else file_config.get("p_grid", [1.0])
    q_grid = parse_float_list(args.q_grid, "q_grid") if args.q_grid else file_config.get("q_grid", [1.0])
    s_grid = parse_float_list(args.s_grid, "s_grid") if args.s_grid else file_config.get("s_grid", [1.0])
    if "a" in args.explicit or "b" in args.explicit:
        interval = [args.a, args.b]
    else:
        interval = file_config.get("interval", [args.a, args.b])
    diagonal = args.diagonal or file_config.get("diagonal", False)

    file_tol = file_config.get("tolerance", {})
    if file_tol and args.atol is None and args.rtol is None:
        verdict_tol = validate_tolerance(verdict_tol._replace(**file_tol))

    config = SweepConfig(
        functions=functions,
        classes=classes,
        p_grid=p_grid,
        q_grid=q_grid,
        s_grid=s_grid,
        interval=(float(interval[0]), float(interval[1])),
        tolerance=verdict_tol,
        diagonal=bool(diagonal),
    )
    reports = sweep(config, workers=args.workers, quad_tol=quad_tol)

    echo = {
        "functions": list(functions),
        "classes": [k.value for k in classes],
        "p_grid": list(p_grid),
        "q_grid": list(q_grid),
        "s_grid": list(s_grid),
        "interval": list(config.interval),
        "diagonal": config.diagonal,
        "workers": args.workers,
    }
    echo.update(_tolerance_config(verdict_tol, quad_tol))
    return render(args.format, "sweep", echo, reports), exit_code_for(reports)


def _cmd_falsify(args: argparse.Namespace) -> Tuple[str, int]:
    name = _require(args, "cls", "--class")
    if name.strip().lower() == ClassKind.S_CONVEX.value and args.s is None:
        cls = ConvexityClass(ClassKind.S_CONVEX)
    else:
        cls = ConvexityClass.parse(name, args.s)
    verdict_tol, quad_tol = _tolerances(args)

    template = ProblemTemplate.for_class(cls.kind)
    overrides = {
        field: parse_range(getattr(args, field), field)
        for field in ProblemTemplate._fields
        if getattr(args, field, None)
    }
    template = template._replace(**overrides)

    summary = falsify(
        cls,
        template,
        trials=args.trials,
        seed=args.seed,
        workers=args.workers,
        tol=verdict_tol,
        quad_tol=quad_tol,
        keep_reports=args.all_reports,
    )
    if summary.violated:
        code = EXIT_VIOLATED
    elif summary.inconclusive:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_HOLDS

    reports = summary.reports if args.all_reports else summary.violations
    config = {"class": cls.kind.value, "s": cls.s, "trials": args.trials, "seed": args.seed}
    config.update({field: list(getattr(template, field)) for field in ProblemTemplate._fields})
    config.update(_tolerance_config(verdict_tol, quad_tol))
    document_summary = dict(summary.to_dict(), exit_code=code)
    return render(args.format, "falsify", config, reports, document_summary), code


def _cmd_catalog(args: argparse.Namespace) -> Tuple[str, int]:
    specs = builtin_catalog(args.a, args.b)
    if args.format == "json":
        document = {
            "command": "catalog",
            "config": {"a": args.a, "b": args.b},
            "functions": [spec.describe() for spec in specs],
        }
        return json.dumps(document, indent=2) + "\n", EXIT_HOLDS

    rows = [
        (
            spec.id,
            spec.monotonicity.value,
            "yes" if spec.symmetric_about_midpoint else "no",
            ", ".join(sorted(c.label for c in spec.declared_classes)) or "(none)",
        )
        for spec in specs
    ]
    if args.format == "csv":
        lines = ["id,monotonicity,symmetric,declared_classes"]
        lines += [f'{r[0]},{r[1]},{r[2]},"{r[3]}"' for r in rows]
        return "\n".join(lines) + "\n", EXIT_HOLDS
    lines = [f"{'id':<14}  {'monotonicity':<12}  {'symmetric':<9}  declared classes"]
    lines += [f"{r[0]:<14}  {r[1]:<12}  {r[2]:<9}  {r[3]}" for r in rows]
    return "\n".join(lines) + "\n", EXIT_HOLDS


_HANDLERS: Dict[str, Callable[[argparse.Namespace], Tuple[str, int]]] = {
    "verify": _cmd_verify,
    "identity": _cmd_identity,
    "sweep": _cmd_sweep,
    "falsify": _cmd_falsify,
    "catalog": _cmd_catalog,
}


def _serve(args: argparse.Namespace) -> int:
    print("\n" + "=" * 50)
    print("Starting inequality checker service")
    print(f"Listening on: http://{args.bind}:{args.port}")
    print("=" * 50 + "\n")
    try:
        uvicorn.run(
            "ineqcheck.main:get_app",
            factory=True,
            host=args.bind,
            port=args.port,
            reload=args.reload,
            log_level="warning" if args.quiet else "info",
        )
    except KeyboardInterrupt:
        print("\nService stopped.")
    return EXIT_HOLDS


def _configure_logging(args: argparse.Namespace) -> None:
    if getattr(args, "verbose", False):
        level = logging.DEBUG
    elif getattr(args, "quiet", False):
        level = logging.WARNING
    else:
        level = logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s:\t[CLI] %(message)s", stream=sys.stderr)
    logger.setLevel(level)


def _one_line(message: str) -> str:
    return " ".join(part.strip() for part in message.splitlines() if part.strip())


def run(argv: Optional[List[str]] = None) -> int:
    """
    Execute one command and return its exit code.

    Reports go to stdout or --output; diagnostics go to stderr as a single line.
    """
    try:
        args = parse_arguments(argv)
    except UsageError as e:
        print(f"error: {_one_line(e.message)}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    _configure_logging(args)
    try:
        if args.command == "serve":
            return _serve(args)
        args = resolve_options(args)
        text, code = _HANDLERS[args.command](args)
    except IneqCheckError as e:
        print(f"error: {_one_line(e.message)}", file=sys.stderr)
        return e.exit_code

    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as e:
            print(f"error: cannot write report to {args.output}: {e.strerror or e}", file=sys.stderr)
            return EXIT_USAGE
        logger.info("Report written to %s", args.output)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
