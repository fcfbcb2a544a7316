"""
End-to-end checks: quadrature left side against closed-form right side.

- check_identity: the weighted integral against its [0, 1] substituted form
  (two-sided equality check of the integrator itself).
- verify: certify f in its class, then compare the integral with the bound.
- sweep: verify over a grid of functions, classes and exponents.
- falsify: verify on randomly generated class members and parameters.

A Violated verdict is only issued when f was certified in the class and the
left side exceeds the bound by more than the quadrature error estimate plus
max(atol, rtol*|rhs|). Everything else that is not a clear pass is
Inconclusive.
"""

import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ineqcheck.bounds import CHANGE_OF_VARIABLES, BetaTerm, EndpointData, bound_for_class
from ineqcheck.config import (
    DEFAULT_QUADRATURE_TOLERANCE,
    DEFAULT_VERDICT_TOLERANCE,
    ToleranceSpec,
    validate_tolerance,
)
from ineqcheck.exceptions import DomainError, IneqCheckError, UsageError
from ineqcheck.function_catalog import (
    CertificationResult,
    ClassKind,
    ConvexityClass,
    FunctionSpec,
    GeneratorShape,
    GridSpec,
    Monotonicity,
    SignCheck,
    certify,
    check_nonnegative,
    generate,
    lookup_many,
)
from ineqcheck.quadrature import (
    IntegralProblem,
    QuadratureResult,
    integrate_symmetric_square,
    integrate_t_form,
    integrate_weighted,
    validate_problem,
)

logger = logging.getLogger("ineqcheck")

SYMMETRIC_SQUARE = "symmetric-square"


class Verdict(str, enum.Enum):
    HOLDS = "Holds"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"


class VerificationReport(NamedTuple):
    """
    Result of one check.

    slack is rhs - lhs; ratio is lhs/rhs and only set when rhs > 0.
    lhs/rhs are NaN when they could not be computed (see note).
    """

    problem: Dict[str, Any]
    formula_id: str
    lhs: float
    lhs_error: float
    rhs: float
    rhs_error: float
    slack: float
    ratio: Optional[float]
    verdict: Verdict
    certifications: Tuple[CertificationResult, ...] = ()
    beta_terms: Tuple[BetaTerm, ...] = ()
    class_label: Optional[str] = None
    seed: Optional[int] = None
    note: Optional[str] = None
    nonnegativity: Optional[SignCheck] = None


class SweepConfig(NamedTuple):
    """Grid of checks; every (function, class, p, q, s) combination is verified."""

    functions: Sequence[str]
    classes: Sequence[ClassKind] = (ClassKind.CONVEX,)
    p_grid: Sequence[float] = (1.0,)
    q_grid: Sequence[float] = (1.0,)
    s_grid: Sequence[float] = (1.0,)
    interval: Tuple[float, float] = (0.0, 1.0)
    tolerance: ToleranceSpec = DEFAULT_VERDICT_TOLERANCE
    diagonal: bool = False

    def validate(self) -> "SweepConfig":
        if not self.functions:
            raise UsageError("Sweep needs at least one function id")
        if not self.classes:
            raise UsageError("Sweep needs at least one class")
        for name in ("p_grid", "q_grid", "s_grid"):
            if not getattr(self, name):
                raise UsageError(f"Sweep {name} must not be empty")
        for value in list(self.p_grid) + list(self.q_grid):
            if not (math.isfinite(value) and value > 0):
                raise DomainError("p/q", value, "weight exponents must be > 0")
        if ClassKind.S_CONVEX in self.classes:
            for s in self.s_grid:
                if not (math.isfinite(s) and 0.0 < s <= 1.0):
                    raise DomainError("s", s, "s-convexity is defined for s in (0, 1]")
        a, b = self.interval
        if not 0.0 <= a < b:
            raise DomainError("interval", self.interval, "needs 0 <= a < b")
        validate_tolerance(self.tolerance)
        return self

    def points(self) -> List[Tuple[str, ConvexityClass, float, float]]:
        """All grid points in lexicographic (function, class, p, q, s) order."""
        pairs = (
            [(p, p) for p in self.p_grid]
            if self.diagonal
            else [(p, q) for p in self.p_grid for q in self.q_grid]
        )
        out: List[Tuple[str, ConvexityClass, float, float]] = []
        for fn in self.functions:
            for kind in self.classes:
                classes = (
                    [ConvexityClass(kind, float(s)) for s in self.s_grid]
                    if kind is ClassKind.S_CONVEX
                    else [ConvexityClass(kind)]
                )
                for p, q in pairs:
                    for cls in classes:
                        out.append((fn, cls, float(p), float(q)))
        return out


class ProblemTemplate(NamedTuple):
    """Sampling ranges for random problems in falsification runs."""

    a_range: Tuple[float, float] = (0.0, 2.0)
    width_range: Tuple[float, float] = (0.25, 3.0)
    p_range: Tuple[float, float] = (0.25, 4.0)
    q_range: Tuple[float, float] = (0.25, 4.0)
    s_range: Tuple[float, float] = (0.05, 1.0)

    @classmethod
    def for_class(cls, kind: ClassKind) -> "ProblemTemplate":
        if kind is ClassKind.Q:
            return cls(p_range=(1.1, 4.0), q_range=(1.1, 4.0))
        return cls()

    def validate(self, kind: ClassKind) -> "ProblemTemplate":
        for name in self._fields:
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise UsageError(f"Range {name}={getattr(self, name)!r} needs finite lo <= hi")
        if self.a_range[0] < 0:
            raise DomainError("a_range", self.a_range, "intervals must lie in [0, inf)")
        if self.width_range[0] <= 0:
            raise DomainError("width_range", self.width_range, "widths must be > 0")
        if self.p_range[0] <= 0 or self.q_range[0] <= 0:
            raise DomainError("p_range/q_range", (self.p_range, self.q_range), "exponents must be > 0")
        if kind is ClassKind.Q and (self.p_range[0] <= 1 or self.q_range[0] <= 1):
            raise DomainError(
                "p_range/q_range", (self.p_range, self.q_range), "the Q-class bound needs p, q > 1"
            )
        if not (0.0 < self.s_range[0] and self.s_range[1] <= 1.0):
            raise DomainError("s_range", self.s_range, "s must lie in (0, 1]")
        return self


class FalsificationSummary(NamedTuple):
    class_label: str
    trials: int
    seed: int
    holds: int
    violated: int
    inconclusive: int
    min_slack: Optional[float]
    min_slack_trial: Optional[int]
    violations: Tuple[VerificationReport, ...]
    reports: Tuple[VerificationReport, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "class": self.class_label,
            "trials": self.trials,
            "seed": self.seed,
            "holds": self.holds,
            "violated": self.violated,
            "inconclusive": self.inconclusive,
            "min_slack": self.min_slack,
            "min_slack_trial": self.min_slack_trial,
        }


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _ratio(lhs: float, rhs: float) -> Optional[float]:
    if math.isfinite(lhs) and math.isfinite(rhs) and rhs > 0:
        return lhs / rhs
    return None


def _check_interval(problem: IntegralProblem) -> None:
    validate_problem(problem)
    if problem.a < 0:
        raise DomainError("a", problem.a, "the interval must lie in [0, inf)")


def _failed_report(
    descriptor: Dict[str, Any],
    formula_id: str,
    class_label: Optional[str],
    note: str,
    seed: Optional[int] = None,
) -> VerificationReport:
    nan = math.nan
    return VerificationReport(
        problem=descriptor,
        formula_id=formula_id,
        lhs=nan,
        lhs_error=nan,
        rhs=nan,
        rhs_error=nan,
        slack=nan,
        ratio=None,
        verdict=Verdict.INCONCLUSIVE,
        class_label=class_label,
        seed=seed,
        note=note,
    )


def _run_ordered(func: Callable[[Any], Any], items: Sequence[Any], workers: int) -> List[Any]:
    """Map func over items, in input order, on up to `workers` threads."""
    if workers < 1:
        raise UsageError(f"workers must be at least 1, got {workers}")
    if workers == 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def check_identity(
    problem: IntegralProblem,
    tol: ToleranceSpec = DEFAULT_VERDICT_TOLERANCE,
    quad_tol: ToleranceSpec = DEFAULT_QUADRATURE_TOLERANCE,
) -> VerificationReport:
    """
    Compare the weighted integral with its substituted [0, 1] form.

    The two are equal for every f, so this is a two-sided check:
    Holds iff |lhs - rhs| <= lhs_error + rhs_error + max(atol, rtol*max(|lhs|, |rhs|)).
    Non-convergence of either integral gives Inconclusive.

    Raises:
        DomainError: If the problem parameters are invalid.
        EvaluationError: If f is not finite at some sample.
    """
    validate_tolerance(tol)
    validate_problem(problem)
    left = integrate_weighted(problem, quad_tol)
    right = integrate_t_form(problem, quad_tol)

    note = None
    if not (left.converged and right.converged):
        verdict = Verdict.INCONCLUSIVE
        note = "quadrature did not converge"
    else:
        allowed = (
            left.error_estimate
            + right.error_estimate
            + tol.threshold(max(abs(left.value), abs(right.value)))
        )
        verdict = Verdict.HOLDS if abs(left.value - right.value) <= allowed else Verdict.VIOLATED
        if verdict is Verdict.VIOLATED:
            note = "weighted and substituted integrals disagree"

    return VerificationReport(
        problem=problem.descriptor(),
        formula_id=CHANGE_OF_VARIABLES,
        lhs=left.value,
        lhs_error=left.error_estimate,
        rhs=right.value,
        rhs_error=right.error_estimate,
        slack=right.value - left.value,
        ratio=_ratio(left.value, right.value),
        verdict=verdict,
        note=note,
    )


def verify(
    f: FunctionSpec,
    cls: ConvexityClass,
    problem: IntegralProblem,
    s: Optional[float] = None,
    tol: ToleranceSpec = DEFAULT_VERDICT_TOLERANCE,
    quad_tol: ToleranceSpec = DEFAULT_QUADRATURE_TOLERANCE,
    grid: Optional[GridSpec] = None,
    seed: Optional[int] = None,
) -> VerificationReport:
    """
    Check the class bound for f on one problem.

    f is certified in cls on the grid and separately checked for f >= 0,
    which every bound assumes. Either failure makes the result Inconclusive
    with the witness (or the most negative node) attached; the integral and
    the bound are still reported when they can be evaluated.

    Args:
        f: Function under test; replaces problem.f.
        cls: Class whose bound is checked.
        problem: Interval and exponents.
        s: Exponent for an s-convex class given without one.
        tol: Verdict tolerance.
        quad_tol: Quadrature tolerance.
        grid: Certification grid; defaults to GridSpec(a, b).
        seed: Recorded in the report for generated functions.

    Raises:
        UsageError: If s conflicts with the class.
        DomainError: If the problem violates a precondition (a < 0, or
            p, q <= 1 for the Q-class bound).
        EvaluationError: If f is not finite at some sample.
    """
    if s is not None:
        if cls.kind is not ClassKind.S_CONVEX:
            raise UsageError(f"s only applies to class s-convex, not {cls.kind.value}")
        if cls.s is not None and cls.s != s:
            raise UsageError(f"s={s!r} conflicts with {cls.label}")
        cls = ConvexityClass.s_convex(s)
    if cls.kind is ClassKind.S_CONVEX and cls.s is None:
        raise UsageError("Class s-convex needs s in (0, 1]")

    validate_tolerance(tol)
    problem = problem._replace(f=f)
    _check_interval(problem)
    if cls.kind is ClassKind.Q:
        if problem.p <= 1:
            raise DomainError("p", problem.p, "the Q-class bound needs p > 1")
        if problem.q <= 1:
            raise DomainError("q", problem.q, "the Q-class bound needs q > 1")

    descriptor = problem.descriptor()
    if cls.kind is ClassKind.S_CONVEX:
        descriptor["s"] = cls.s

    grid = grid or GridSpec(problem.a, problem.b)
    certification = certify(f, cls, grid, label=f.id)
    sign = check_nonnegative(f, grid, label=f.id)
    lhs = integrate_weighted(problem, quad_tol)

    monotonicity = f.monotonicity if f.monotonicity is not Monotonicity.NONE else None
    endpoints = EndpointData(float(f(problem.a)), float(f(problem.b)), problem.a, problem.b)
    try:
        bound = bound_for_class(
            cls,
            endpoints,
            problem.p,
            problem.q,
            symmetric=bool(f.symmetric_about_midpoint),
            monotonicity=monotonicity,
        )
    except DomainError as e:
        if certification.certified and sign.nonnegative:
            raise
        # Negative endpoint values already fail certification.
        logger.debug("Bound for %s not evaluable: %s", f.id, e.message)
        bound = None

    rhs = bound.value if bound is not None else math.nan
    formula_id = bound.formula_id if bound is not None else cls.kind.value
    note = None

    if not certification.certified:
        verdict = Verdict.INCONCLUSIVE
        claim = (
            f"declares {cls.label} but the grid check refutes it"
            if f.declares(cls)
            else f"is not certified {cls.label}"
        )
        note = (
            f"{f.id} {claim} ({certification.reason}); "
            f"witness (x, y, lambda)={certification.witness!r}"
        )
        logger.warning("Certification refuted: %s", note)
    elif not sign.nonnegative:
        verdict = Verdict.INCONCLUSIVE
        note = (
            f"{f.id} is negative at x={sign.argmin!r} (f={sign.min_value!r}); "
            f"the bounds assume f >= 0"
        )
        logger.warning("Sign check failed: %s", note)
    elif not lhs.converged:
        verdict = Verdict.INCONCLUSIVE
        note = "quadrature did not converge"
    elif lhs.value <= rhs + lhs.error_estimate + tol.threshold(rhs):
        verdict = Verdict.HOLDS
    else:
        verdict = Verdict.VIOLATED
        logger.warning(
            "Bound %s violated for %s: lhs=%r rhs=%r", formula_id, f.id, lhs.value, rhs
        )

    return VerificationReport(
        problem=descriptor,
        formula_id=formula_id,
        lhs=lhs.value,
        lhs_error=lhs.error_estimate,
        rhs=rhs,
        rhs_error=0.0,
        slack=rhs - lhs.value,
        ratio=_ratio(lhs.value, rhs),
        verdict=verdict,
        certifications=(certification,),
        beta_terms=bound.beta_terms if bound is not None else (),
        class_label=cls.label,
        seed=seed,
        note=note,
        nonnegativity=sign,
    )


def symmetric_lhs_check(
    spec: FunctionSpec,
    problem: IntegralProblem,
    tol: ToleranceSpec = DEFAULT_VERDICT_TOLERANCE,
    quad_tol: ToleranceSpec = DEFAULT_QUADRATURE_TOLERANCE,
) -> VerificationReport:
    """
    For f symmetric about the midpoint, compare the weighted integral with
    the integral of (x-a)^p (b-x)^q f(x)^2.
    """
    if not spec.symmetric_about_midpoint:
        raise UsageError(f"{spec.id} is not flagged symmetric about the midpoint")
    problem = problem._replace(f=spec)
    _check_interval(problem)
    left: QuadratureResult = integrate_weighted(problem, quad_tol)
    right: QuadratureResult = integrate_symmetric_square(problem, quad_tol)

    if not (left.converged and right.converged):
        verdict = Verdict.INCONCLUSIVE
    else:
        allowed = (
            left.error_estimate
            + right.error_estimate
            + tol.threshold(max(abs(left.value), abs(right.value)))
        )
        verdict = Verdict.HOLDS if abs(left.value - right.value) <= allowed else Verdict.VIOLATED

    return VerificationReport(
        problem=problem.descriptor(),
        formula_id=SYMMETRIC_SQUARE,
        lhs=left.value,
        lhs_error=left.error_estimate,
        rhs=right.value,
        rhs_error=right.error_estimate,
        slack=right.value - left.value,
        ratio=_ratio(left.value, right.value),
        verdict=verdict,
    )


def sweep(
    config: SweepConfig,
    workers: int = 1,
    quad_tol: ToleranceSpec = DEFAULT_QUADRATURE_TOLERANCE,
) -> List[VerificationReport]:
    """
    Verify every grid point of config.

    Reports come back in lexicographic (function, class, p, q, s) order no
    matter how many workers run them. A point that fails with a library error
    is recorded as Inconclusive and the sweep carries on.

    Raises:
        UsageError: For an empty or malformed config.
        FunctionNotFoundError: For an unknown function id.
    """
    config.validate()
    a, b = config.interval
    specs = {spec.id: spec for spec in lookup_many(config.functions, a, b)}
    points = config.points()
    logger.info("Sweeping %d grid points on %d worker(s)", len(points), workers)

    def run_point(point: Tuple[str, ConvexityClass, float, float]) -> VerificationReport:
        fn, cls, p, q = point
        spec = specs[fn]
        problem = IntegralProblem(a, b, p, q, spec)
        try:
            return verify(spec, cls, problem, tol=config.tolerance, quad_tol=quad_tol)
        except IneqCheckError as e:
            logger.warning("Sweep point %s/%s p=%r q=%r failed: %s", fn, cls.label, p, q, e.message)
            descriptor = problem.descriptor()
            if cls.kind is ClassKind.S_CONVEX:
                descriptor["s"] = cls.s
            return _failed_report(descriptor, cls.kind.value, cls.label, e.message)

    reports = _run_ordered(run_point, points, workers)
    logger.info(
        "Sweep finished: %d holds, %d violated, %d inconclusive",
        sum(r.verdict is Verdict.HOLDS for r in reports),
        sum(r.verdict is Verdict.VIOLATED for r in reports),
        sum(r.verdict is Verdict.INCONCLUSIVE for r in reports),
    )
    return reports


def _trial(
    cls: ConvexityClass,
    template: ProblemTemplate,
    seed: int,
    index: int,
    tol: ToleranceSpec,
    quad_tol: ToleranceSpec,
) -> VerificationReport:
    rng = np.random.default_rng([seed, index])
    a = float(rng.uniform(*template.a_range))
    b = a + float(rng.uniform(*template.width_range))
    p = float(rng.uniform(*template.p_range))
    q = float(rng.uniform(*template.q_range))
    if cls.kind is ClassKind.S_CONVEX and cls.s is None:
        trial_cls = ConvexityClass(ClassKind.S_CONVEX, float(rng.uniform(*template.s_range)))
    else:
        trial_cls = cls
    function_seed = int(rng.integers(0, 2**32))

    problem_fields = {"a": a, "b": b, "p": p, "q": q, "trial": index}
    try:
        spec = generate(trial_cls, function_seed, GeneratorShape(interval=(a, b)))
        return verify(
            spec,
            trial_cls,
            IntegralProblem(a, b, p, q, spec),
            tol=tol,
            quad_tol=quad_tol,
            seed=function_seed,
        )
    except IneqCheckError as e:
        logger.warning("Trial %d (%s) failed: %s", index, trial_cls.label, e.message)
        descriptor = dict(problem_fields, function=f"gen-{trial_cls.kind.value}-{function_seed}")
        return _failed_report(
            descriptor, trial_cls.kind.value, trial_cls.label, e.message, seed=function_seed
        )


def falsify(
    cls: ConvexityClass,
    template: Optional[ProblemTemplate] = None,
    trials: int = 200,
    seed: int = 0,
    workers: int = 1,
    tol: ToleranceSpec = DEFAULT_VERDICT_TOLERANCE,
    quad_tol: ToleranceSpec = DEFAULT_QUADRATURE_TOLERANCE,
    keep_reports: bool = False,
) -> FalsificationSummary:
    """
    Search for counterexamples with seeded random class members and parameters.

    Trial i draws everything from default_rng([seed, i]), so a run is
    reproducible bit for bit whatever the worker count. For the s-convex
    family s is drawn from the template unless cls fixes it.

    Returns:
        Counts per verdict, the smallest slack among holding trials and
        every Violated report (all reports with keep_reports=True).
    """
    if trials < 1:
        raise UsageError(f"trials must be at least 1, got {trials}")
    template = (template or ProblemTemplate.for_class(cls.kind)).validate(cls.kind)
    validate_tolerance(tol)
    label = cls.label if cls.s is not None or cls.kind is not ClassKind.S_CONVEX else "s-convex"
    logger.info("Falsifying %s: %d trials, seed %d", label, trials, seed)

    reports: List[VerificationReport] = _run_ordered(
        lambda i: _trial(cls, template, seed, i, tol, quad_tol), list(range(trials)), workers
    )

    holds = [(i, r) for i, r in enumerate(reports) if r.verdict is Verdict.HOLDS]
    violations = tuple(r for r in reports if r.verdict is Verdict.VIOLATED)
    min_slack, min_slack_trial = None, None
    if holds:
        min_slack_trial, best = min(holds, key=lambda item: item[1].slack)
        min_slack = best.slack

    summary = FalsificationSummary(
        class_label=label,
        trials=trials,
        seed=seed,
        holds=len(holds),
        violated=len(violations),
        inconclusive=trials - len(holds) - len(violations),
        min_slack=min_slack,
        min_slack_trial=min_slack_trial,
        violations=violations,
        reports=tuple(reports) if keep_reports else (),
    )
    logger.info(
        "Falsification of %s finished: %d holds, %d violated, %d inconclusive",
        label,
        summary.holds,
        summary.violated,
        summary.inconclusive,
    )
    return summary


def verdicts(reports: Iterable[VerificationReport]) -> Dict[str, int]:
    counts = {v.value: 0 for v in Verdict}
    for report in reports:
        counts[report.verdict.value] += 1
    return counts
