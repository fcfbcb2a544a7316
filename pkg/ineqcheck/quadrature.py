"""
Adaptive Gauss-Kronrod quadrature for weighted-product integrals.

Two integrals are provided for one IntegralProblem (a, b, p, q, f):

    weighted form   int_a^b (x-a)^p (b-x)^q f(x) f(a+b-x) dx
    t form          (b-a)^(p+q+1) int_0^1 (1-t)^p t^q f(ta+(1-t)b) f((1-t)a+tb) dt

They are equal after the substitution x = ta + (1-t)b, which makes the pair a
self-check of the integrator. Each panel is integrated with the 15-point
Kronrod rule and its embedded 7-point Gauss rule; |K15 - G7| is the panel
error. Panels are bisected worst-first until the summed error drops below
max(atol, rtol*|value|). Exponents below 1 make the integrand's derivative
blow up at an endpoint, so the initial mesh is graded geometrically toward
that endpoint before adaptivity starts.
"""

import logging
import math
import sys
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ineqcheck.config import DEFAULT_QUADRATURE_TOLERANCE, ToleranceSpec, validate_tolerance
from ineqcheck.exceptions import DomainError, EvaluationError

logger = logging.getLogger("ineqcheck")

Integrand = Callable[[np.ndarray], np.ndarray]

# ---- Gauss-Kronrod 7/15 constants ----
# Non-negative Kronrod abscissae; odd positions (1, 3, 5, 7) are the Gauss nodes.
_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]

GRADING_RATIO = 0.25
GRADING_DEPTH = 12
_ROUNDOFF_FACTOR = 50.0 * sys.float_info.epsilon


class IntegralProblem(NamedTuple):
    """
    One weighted-product integral instance.

    Attributes:
        a: Left endpoint.
        b: Right endpoint (a < b).
        p: Exponent of the left weight (x - a), p > 0.
        q: Exponent of the right weight (b - x), q > 0.
        f: Vectorized function evaluable on [a, b]; a FunctionSpec works directly.
    """

    a: float
    b: float
    p: float
    q: float
    f: Callable[[np.ndarray], np.ndarray]

    @property
    def label(self) -> str:
        return str(getattr(self.f, "id", getattr(self.f, "__name__", "f")))

    def descriptor(self) -> dict:
        """Serializable summary of the problem (function id and parameters)."""
        return {
            "function": self.label,
            "a": float(self.a),
            "b": float(self.b),
            "p": float(self.p),
            "q": float(self.q),
        }


class QuadratureResult(NamedTuple):
    """Integral value with its error estimate and convergence diagnostics."""

    value: float
    error_estimate: float
    subdivisions: int
    converged: bool
    evaluations: int = 0


def validate_problem(problem: IntegralProblem) -> IntegralProblem:
    """
    Check the parameter invariants of an IntegralProblem.

    Raises:
        DomainError: If a >= b, p <= 0, q <= 0 or any value is not finite.
    """
    for name in ("a", "b", "p", "q"):
        value = getattr(problem, name)
        if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
            raise DomainError(name, value, "must be a finite real number")
    if not problem.a < problem.b:
        raise DomainError("b", problem.b, f"the interval needs a < b (a={problem.a!r})")
    if problem.p <= 0:
        raise DomainError("p", problem.p, "weight exponents must be > 0")
    if problem.q <= 0:
        raise DomainError("q", problem.q, "weight exponents must be > 0")
    if not callable(problem.f):
        raise DomainError("f", problem.f, "must be callable")
    return problem


def _checked(f: Callable[[np.ndarray], np.ndarray], label: str) -> Integrand:
    """Wrap f so non-finite samples raise EvaluationError naming the argument."""

    def evaluate(x: np.ndarray) -> np.ndarray:
        fx = np.broadcast_to(np.asarray(f(x), dtype=float), np.shape(x))
        bad = ~np.isfinite(fx)
        if bad.any():
            idx = tuple(np.argwhere(bad)[0])
            raise EvaluationError(label, float(np.asarray(x)[idx]), float(fx[idx]))
        return fx

    return evaluate


def _evaluate_panels(
    integrand: Integrand, lo: np.ndarray, hi: np.ndarray, label: str
) -> Tuple[np.ndarray, np.ndarray]:
    """Apply the 7/15 pair to every panel [lo[i], hi[i]] at once."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = center[:, None] + half[:, None] * KRONROD_NODES[None, :]
    fx = np.asarray(integrand(x), dtype=float)

    bad = ~np.isfinite(fx)
    if bad.any():
        idx = tuple(np.argwhere(bad)[0])
        raise EvaluationError(label, float(x[idx]), float(fx[idx]))

    kronrod = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    abs_sum = half * (np.abs(fx) @ KRONROD_WEIGHTS)
    error = np.maximum(np.abs(kronrod - gauss), _ROUNDOFF_FACTOR * abs_sum)
    return kronrod, error


def base_rule(integrand: Integrand, lo: float, hi: float) -> Tuple[float, float]:
    """
    Non-adaptive 15-point Kronrod and embedded 7-point Gauss values on [lo, hi].

    Returns:
        Tuple of (kronrod_value, gauss_value).
    """
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fx = np.asarray(integrand(center + half * KRONROD_NODES), dtype=float)
    return float(half * (fx @ KRONROD_WEIGHTS)), float(half * (fx @ GAUSS_WEIGHTS))


def graded_breakpoints(
    lo: float,
    hi: float,
    refine_left: bool,
    refine_right: bool,
    ratio: float = GRADING_RATIO,
    depth: int = GRADING_DEPTH,
) -> np.ndarray:
    """
    Initial mesh refined geometrically toward the requested endpoints.

    With refinement on the left the breakpoints lo + (mid - lo) * ratio**k,
    k = 0..depth, are added (mid is the interval midpoint); the right side
    mirrors it. Without refinement the mesh is just [lo, hi].
    """
    points = {float(lo), float(hi)}
    mid = 0.5 * (lo + hi)
    half = mid - lo
    for k in range(depth + 1):
        step = half * ratio**k
        if refine_left:
            points.add(lo + step)
        if refine_right:
            points.add(hi - step)
    return np.array(sorted(points))


def adaptive_integrate(
    integrand: Integrand,
    lo: float,
    hi: float,
    tol: ToleranceSpec = DEFAULT_QUADRATURE_TOLERANCE,
    breakpoints: Optional[Sequence[float]] = None,
    label: str = "f",
) -> QuadratureResult:
    """
    Integrate over [lo, hi] by worst-first bisection of Gauss-Kronrod panels.

    The panel with the largest error estimate is split next; ties go to the
    leftmost panel, so a fixed input always produces the same result bit for
    bit. Running out of subdivisions is not an error: the result comes back
    with converged=False.

    Args:
        integrand: Vectorized integrand accepting arrays of any shape.
        lo: Lower limit.
        hi: Upper limit.
        tol: Tolerances and subdivision budget.
        breakpoints: Optional initial mesh including both limits.
        label: Name used in evaluation errors.

    Returns:
        QuadratureResult for the integral.
    """
    validate_tolerance(tol)
    edges = np.asarray(breakpoints if breakpoints is not None else [lo, hi], dtype=float)

    panel_lo: List[float] = [float(v) for v in edges[:-1]]
    panel_hi: List[float] = [float(v) for v in edges[1:]]
    values_arr, errors_arr = _evaluate_panels(
        integrand, edges[:-1], edges[1:], label
    )
    values: List[float] = values_arr.tolist()
    errors: List[float] = errors_arr.tolist()
    evaluations = 15 * len(values)

    converged = False
    while True:
        total = math.fsum(values)
        total_error = math.fsum(errors)
        if total_error <= tol.threshold(total):
            converged = True
            break
        if len(values) >= tol.max_subdivisions:
            break

        i = int(np.argmax(errors))
        left, right = panel_lo[i], panel_hi[i]
        mid = 0.5 * (left + right)
        if not left < mid < right:
            logger.debug("Panel [%r, %r] cannot be bisected further", left, right)
            break

        new_values, new_errors = _evaluate_panels(
            integrand, np.array([left, mid]), np.array([mid, right]), label
        )
        evaluations += 30
        panel_hi[i] = mid
        values[i], errors[i] = float(new_values[0]), float(new_errors[0])
        panel_lo.insert(i + 1, mid)
        panel_hi.insert(i + 1, right)
        values.insert(i + 1, float(new_values[1]))
        errors.insert(i + 1, float(new_errors[1]))

    if converged:
        logger.debug(
            "Quadrature of %s converged: %d panels, error %.3e", label, len(values), total_error
        )
    else:
        logger.info(
            "Quadrature of %s did not converge: %d panels, error %.3e (requested %.3e)",
            label,
            len(values),
            total_error,
            tol.threshold(total),
        )

    return QuadratureResult(
        value=total,
        error_estimate=total_error,
        subdivisions=len(values),
        converged=converged,
        evaluations=evaluations,
    )


def _scaled(result: QuadratureResult, factor: float) -> QuadratureResult:
    return result._replace(
        value=result.value * factor, error_estimate=result.error_estimate * factor
    )


def integrate_weighted(
    problem: IntegralProblem, tol: ToleranceSpec = DEFAULT_QUADRATURE_TOLERANCE
) -> QuadratureResult:
    """
    Integrate (x-a)^p (b-x)^q f(x) f(a+b-x) over [a, b].

    Raises:
        DomainError: If the problem parameters are invalid.
        EvaluationError: If f is not finite at some sample point.
    """
    a, b, p, q, _ = validate_problem(problem)
    f = _checked(problem.f, problem.label)

    def integrand(x: np.ndarray) -> np.ndarray:
        weight = np.power(np.maximum(x - a, 0.0), p) * np.power(np.maximum(b - x, 0.0), q)
        return weight * f(x) * f(a + b - x)

    mesh = graded_breakpoints(a, b, refine_left=p < 1, refine_right=q < 1)
    return adaptive_integrate(integrand, a, b, tol, mesh, label=problem.label)


def integrate_t_form(
    problem: IntegralProblem, tol: ToleranceSpec = DEFAULT_QUADRATURE_TOLERANCE
) -> QuadratureResult:
    """
    Integrate the substituted form over [0, 1], including the (b-a)^(p+q+1) factor.

    The value and error estimate are both multiplied by the prefactor, so the
    [0, 1] integral runs with atol divided by it; convergence is judged on the
    scaled result against tol.
    """
    a, b, p, q, _ = validate_problem(problem)
    f = _checked(problem.f, problem.label)
    prefactor = (b - a) ** (p + q + 1.0)
    inner_tol = tol._replace(atol=max(tol.atol / prefactor, sys.float_info.min))

    def integrand(t: np.ndarray) -> np.ndarray:
        s = np.clip(t, 0.0, 1.0)
        weight = np.power(1.0 - s, p) * np.power(s, q)
        return weight * f(s * a + (1.0 - s) * b) * f((1.0 - s) * a + s * b)

    # t^q sits at t=0 and (1-t)^p at t=1
    mesh = graded_breakpoints(0.0, 1.0, refine_left=q < 1, refine_right=p < 1)
    result = _scaled(
        adaptive_integrate(integrand, 0.0, 1.0, inner_tol, mesh, label=problem.label), prefactor
    )
    return result._replace(
        converged=result.converged and result.error_estimate <= tol.threshold(result.value)
    )


def integrate_symmetric_square(
    problem: IntegralProblem, tol: ToleranceSpec = DEFAULT_QUADRATURE_TOLERANCE
) -> QuadratureResult:
    """
    Integrate (x-a)^p (b-x)^q f(x)^2 over [a, b].

    For f symmetric about the midpoint this equals integrate_weighted.
    """
    a, b, p, q, _ = validate_problem(problem)
    f = _checked(problem.f, problem.label)

    def integrand(x: np.ndarray) -> np.ndarray:
        weight = np.power(np.maximum(x - a, 0.0), p) * np.power(np.maximum(b - x, 0.0), q)
        return weight * np.square(f(x))

    mesh = graded_breakpoints(a, b, refine_left=p < 1, refine_right=q < 1)
    return adaptive_integrate(integrand, a, b, tol, mesh, label=problem.label)
