"""
Named test functions, convexity-class certifiers and seeded class generators.

Four function classes are handled, all on an interval [a, b] within [0, inf):

    s-convex (second sense)  f(lx + (1-l)y) <= l^s f(x) + (1-l)^s f(y),   l in (0,1)
    quasi-convex             f(lx + (1-l)y) <= max(f(x), f(y)),          l in [0,1]
    P-class                  f(lx + (1-l)y) <= f(x) + f(y),              l in [0,1], f >= 0
    Q-class                  f(lx + (1-l)y) <= f(x)/l + f(y)/(1-l),      l in (0,1), f >= 0

Ordinary convexity is the s = 1 member of the first family. Membership is
certified on a finite (x, y, l) grid, not proved: a Certified result means no
grid triple violates the defining inequality by more than the tolerance.
"""

import enum
import logging
import math
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from ineqcheck.config import DEFAULT_CERTIFICATION_TOLERANCE
from ineqcheck.exceptions import (
    DomainError,
    EvaluationError,
    FunctionNotFoundError,
    GenerationError,
    UsageError,
)

logger = logging.getLogger("ineqcheck")

Evaluator = Callable[[np.ndarray], Any]

CATALOG_S_VALUES: Tuple[float, ...] = (0.25, 0.5, 0.75)


class ClassKind(str, enum.Enum):
    """Function class names as they appear on the command line and in reports."""

    S_CONVEX = "s-convex"
    CONVEX = "convex"
    QUASI = "quasi"
    P = "p"
    Q = "q"


class Monotonicity(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    NONE = "none"


class CertVerdict(str, enum.Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"


class ConvexityClass(NamedTuple):
    """
    A function class, with the exponent s for the s-convex family.

    Attributes:
        kind: Which defining inequality applies.
        s: Exponent in (0, 1]; only set for ClassKind.S_CONVEX.
    """

    kind: ClassKind
    s: Optional[float] = None

    @classmethod
    def parse(cls, name: str, s: Optional[float] = None) -> "ConvexityClass":
        """
        Build a class from its command-line name and optional exponent.

        Raises:
            UsageError: If the name is unknown, or s is missing for s-convex
                or given for any other class.
            DomainError: If s lies outside (0, 1].
        """
        try:
            kind = ClassKind(name.strip().lower())
        except ValueError:
            names = ", ".join(k.value for k in ClassKind)
            raise UsageError(f"Unknown class {name!r} (choose from: {names})")
        if kind is ClassKind.S_CONVEX:
            if s is None:
                raise UsageError("Class s-convex needs --s in (0, 1]")
            if not (isinstance(s, (int, float)) and math.isfinite(s) and 0.0 < s <= 1.0):
                raise DomainError("s", s, "s-convexity is defined for s in (0, 1]")
            return cls(kind, float(s))
        if s is not None:
            raise UsageError(f"--s only applies to class s-convex, not {kind.value}")
        return cls(kind)

    @classmethod
    def s_convex(cls, s: float) -> "ConvexityClass":
        return cls.parse(ClassKind.S_CONVEX.value, s)

    @property
    def label(self) -> str:
        if self.kind is ClassKind.S_CONVEX:
            return f"s-convex(s={self.s!r})"
        return self.kind.value

    @property
    def weight_exponent(self) -> float:
        """Exponent applied to the weights l and 1-l; 1 for ordinary convexity."""
        if self.kind is ClassKind.S_CONVEX:
            return float(self.s)  # pyrefly: ignore
        return 1.0

    @property
    def requires_nonnegative(self) -> bool:
        return self.kind in (ClassKind.P, ClassKind.Q)

    @property
    def open_lambda(self) -> bool:
        """True when l is sampled from (0, 1) rather than [0, 1]."""
        return self.kind in (ClassKind.S_CONVEX, ClassKind.CONVEX, ClassKind.Q)


CONVEX = ConvexityClass(ClassKind.CONVEX)
QUASI_CONVEX = ConvexityClass(ClassKind.QUASI)
P_CLASS = ConvexityClass(ClassKind.P)
Q_CLASS = ConvexityClass(ClassKind.Q)


class GridSpec(NamedTuple):
    """Certification grid: x and y nodes spanning [a, b] and the l sample count."""

    a: float
    b: float
    x_nodes: int = 101
    y_nodes: int = 101
    lambda_nodes: int = 99

    def validate(self) -> "GridSpec":
        if min(self.x_nodes, self.y_nodes, self.lambda_nodes) < 3:
            raise UsageError(
                f"Certification grid needs at least 3 nodes per axis, got "
                f"{self.x_nodes}x{self.y_nodes}x{self.lambda_nodes}"
            )
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise DomainError("b", self.b, f"grid interval needs a < b (a={self.a!r})")
        return self

    def points(self) -> Tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.a, self.b, self.x_nodes),
            np.linspace(self.a, self.b, self.y_nodes),
        )

    def lambdas(self, open_interval: bool) -> np.ndarray:
        """k/(n+1) for k = 1..n, plus 0 and 1 on the closed grid."""
        denominator = self.lambda_nodes + 1
        if open_interval:
            return np.arange(1, denominator) / denominator
        return np.arange(0, denominator + 1) / denominator

    def describe(self) -> str:
        return f"{self.x_nodes}x{self.y_nodes}x{self.lambda_nodes}"


class FunctionSpec(NamedTuple):
    """
    A named real function on an interval together with what is claimed about it.

    Calling a spec evaluates it element-wise on scalars or arrays of any shape.
    """

    id: str
    evaluator: Evaluator
    domain: Tuple[float, float]
    declared_classes: FrozenSet[ConvexityClass] = frozenset()
    symmetric_about_midpoint: Optional[bool] = None
    monotonicity: Monotonicity = Monotonicity.NONE
    parameters: Optional[Dict[str, Any]] = None

    def __call__(self, x: Any) -> Any:
        arr = np.asarray(x, dtype=float)
        out = np.broadcast_to(np.asarray(self.evaluator(arr), dtype=float), arr.shape)
        return float(out) if out.ndim == 0 else np.array(out)

    def declares(self, cls: ConvexityClass) -> bool:
        """
        True if membership in cls follows from the declared classes.

        Nonnegative s-convex functions are t-convex for every t <= s, and
        convex ones are s-convex for every s.
        """
        if cls in self.declared_classes:
            return True
        if cls.kind in (ClassKind.S_CONVEX, ClassKind.CONVEX):
            target = cls.weight_exponent
            return any(
                c.kind in (ClassKind.S_CONVEX, ClassKind.CONVEX) and c.weight_exponent >= target
                for c in self.declared_classes
            )
        return False

    def scaled(self, c: float) -> "FunctionSpec":
        """Return c*f for c > 0; every class membership is kept."""
        if not (math.isfinite(c) and c > 0):
            raise DomainError("c", c, "scaling factor must be positive and finite")
        base = self.evaluator

        def evaluate(x: np.ndarray) -> Any:
            return c * np.asarray(base(x), dtype=float)

        params = dict(self.parameters or {})
        params["scale"] = c
        return self._replace(id=f"{c!r}*{self.id}", evaluator=evaluate, parameters=params)

    def describe(self) -> Dict[str, Any]:
        """Serializable summary: id, interval, claims and parameters."""
        return {
            "id": self.id,
            "domain": [float(self.domain[0]), float(self.domain[1])],
            "declared_classes": sorted(c.label for c in self.declared_classes),
            "symmetric_about_midpoint": self.symmetric_about_midpoint,
            "monotonicity": self.monotonicity.value,
            "parameters": dict(self.parameters or {}),
        }


class CertificationResult(NamedTuple):
    """Outcome of a grid certification of one function against one class."""

    convexity_class: ConvexityClass
    grid: GridSpec
    max_violation: float
    witness: Optional[Tuple[float, float, float]]
    verdict: CertVerdict
    reason: Optional[str] = None
    min_value: float = math.nan
    tolerance: float = DEFAULT_CERTIFICATION_TOLERANCE

    @property
    def certified(self) -> bool:
        return self.verdict is CertVerdict.CERTIFIED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "class": self.convexity_class.label,
            "grid": self.grid.describe(),
            "verdict": self.verdict.value,
            "reason": self.reason,
            "max_violation": self.max_violation,
            "min_value": self.min_value,
            "witness": list(self.witness) if self.witness is not None else None,
        }


class SignCheck(NamedTuple):
    """Grid check of f >= -tolerance, the hypothesis every bound relies on."""

    grid: GridSpec
    min_value: float
    argmin: float
    tolerance: float = DEFAULT_CERTIFICATION_TOLERANCE

    @property
    def nonnegative(self) -> bool:
        return self.min_value >= -self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": (CertVerdict.CERTIFIED if self.nonnegative else CertVerdict.REFUTED).value,
            "min_value": self.min_value,
            "argmin": self.argmin,
        }


class GeneratorShape(NamedTuple):
    """Bounds on randomly generated class members."""

    interval: Tuple[float, float] = (0.0, 1.0)
    max_nodes: int = 6
    value_range: Tuple[float, float] = (0.0, 5.0)
    max_attempts: int = 25


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------


def _evaluate_finite(f: Callable[[Any], Any], x: np.ndarray, label: str) -> np.ndarray:
    fx = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    bad = ~np.isfinite(fx)
    if bad.any():
        idx = tuple(np.argwhere(bad)[0])
        raise EvaluationError(label, float(x[idx]), float(fx[idx]))
    return fx


def _right_hand_side(cls: ConvexityClass, fx: Any, fy: Any, lam: Any) -> Any:
    if cls.kind is ClassKind.QUASI:
        return np.maximum(fx, fy)
    if cls.kind is ClassKind.P:
        return fx + fy
    if cls.kind is ClassKind.Q:
        return fx / lam + fy / (1.0 - lam)
    s = cls.weight_exponent
    return np.power(lam, s) * fx + np.power(1.0 - lam, s) * fy


def defining_violation(
    cls: ConvexityClass, f: Callable[[Any], Any], x: float, y: float, lam: float
) -> float:
    """
    Signed slack f(lx + (1-l)y) - rhs of the class's defining inequality at one triple.

    Positive values mean the inequality fails at (x, y, lam).
    """
    fx, fy = float(f(x)), float(f(y))
    fz = float(f(lam * x + (1.0 - lam) * y))
    if cls.kind is ClassKind.QUASI:
        rhs = max(fx, fy)
    elif cls.kind is ClassKind.P:
        rhs = fx + fy
    elif cls.kind is ClassKind.Q:
        if not 0.0 < lam < 1.0:
            raise DomainError("lambda", lam, "the Q-class inequality needs lambda in (0, 1)")
        rhs = fx / lam + fy / (1.0 - lam)
    else:
        s = cls.weight_exponent
        rhs = lam**s * fx + (1.0 - lam) ** s * fy
    return fz - rhs


def _grid_minimum(
    xs: np.ndarray, fx: np.ndarray, ys: np.ndarray, fy: np.ndarray
) -> Tuple[float, float]:
    nodes = np.concatenate([xs, ys])
    values = np.concatenate([fx, fy])
    i = int(np.argmin(values))
    return float(values[i]), float(nodes[i])


def check_nonnegative(
    f: Callable[[Any], Any],
    grid: GridSpec,
    tol: float = DEFAULT_CERTIFICATION_TOLERANCE,
    label: Optional[str] = None,
) -> SignCheck:
    """
    Check f >= -tol on the x and y nodes of grid.

    Raises:
        EvaluationError: If f is not finite at a node.
    """
    grid.validate()
    name = label or str(getattr(f, "id", "f"))
    xs, ys = grid.points()
    min_value, argmin = _grid_minimum(
        xs, _evaluate_finite(f, xs, name), ys, _evaluate_finite(f, ys, name)
    )
    if min_value < -tol:
        logger.debug("%s is negative at x=%r (%.3e)", name, argmin, min_value)
    return SignCheck(grid, min_value, argmin, tol)


def certify(
    f: Callable[[Any], Any],
    cls: ConvexityClass,
    grid: GridSpec,
    tol: float = DEFAULT_CERTIFICATION_TOLERANCE,
    label: Optional[str] = None,
) -> CertificationResult:
    """
    Check the defining inequality of cls for f at every grid triple (x, y, l).

    Classes whose definition includes nonnegativity (P and Q) first check
    f >= -tol on the grid nodes. A sign failure there is witnessed by
    (x, x, 1/2) at the most negative node, where the defining inequality
    itself fails. The worst signed violation is recorded either way, and ties
    between equally bad triples go to the first one in (x, y, l) order.

    Args:
        f: Vectorized function, typically a FunctionSpec.
        cls: Class to certify.
        grid: Node counts and interval.
        tol: Absolute tolerance on the inequality slack.
        label: Function name used in evaluation errors.

    Returns:
        CertificationResult; Refuted results always carry a witness that
        defining_violation re-evaluates above tol.

    Raises:
        EvaluationError: If f is not finite at a grid point.
    """
    grid.validate()
    name = label or str(getattr(f, "id", "f"))

    xs, ys = grid.points()
    lams = grid.lambdas(cls.open_lambda)
    fx = _evaluate_finite(f, xs, name)
    fy = _evaluate_finite(f, ys, name)
    min_value, argmin = _grid_minimum(xs, fx, ys, fy)

    if cls.requires_nonnegative and min_value < -tol:
        witness = (argmin, argmin, 0.5)
        logger.debug("%s is negative at x=%r, not a %s member", name, argmin, cls.label)
        return CertificationResult(
            convexity_class=cls,
            grid=grid,
            max_violation=defining_violation(cls, f, *witness),
            witness=witness,
            verdict=CertVerdict.REFUTED,
            reason="nonnegativity",
            min_value=min_value,
            tolerance=tol,
        )

    X = xs[:, None, None]
    Y = ys[None, :, None]
    L = lams[None, None, :]
    Z = L * X + (1.0 - L) * Y
    fz = _evaluate_finite(f, Z, name)
    violation = fz - _right_hand_side(cls, fx[:, None, None], fy[None, :, None], L)

    flat = int(np.argmax(violation))
    i, j, k = np.unravel_index(flat, violation.shape)
    worst = float(violation[i, j, k])

    if worst > tol:
        witness = (float(xs[i]), float(ys[j]), float(lams[k]))
        logger.debug(
            "%s violates %s at (x, y, lambda)=%r by %.3e", name, cls.label, witness, worst
        )
        return CertificationResult(
            cls, grid, worst, witness, CertVerdict.REFUTED, "definition", min_value, tol
        )

    logger.debug("%s certified %s on %s grid", name, cls.label, grid.describe())
    return CertificationResult(cls, grid, worst, None, CertVerdict.CERTIFIED, None, min_value, tol)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def _knots(rng: np.random.Generator, shape: GeneratorShape) -> np.ndarray:
    a, b = shape.interval
    count = int(rng.integers(3, max(shape.max_nodes, 3) + 1))
    interior = np.sort(rng.uniform(a, b, size=count - 2))
    return np.concatenate([[a], interior, [b]])


def _fit_range(
    values: np.ndarray, rng: np.random.Generator, shape: GeneratorShape
) -> np.ndarray:
    """Positive affine map of values into the shape's value range."""
    lo, hi = shape.value_range
    offset = rng.uniform(lo, lo + 0.5 * (hi - lo))
    height = rng.uniform(0.1, 1.0) * (hi - offset)
    span = float(values.max() - values.min())
    if span == 0.0:
        return np.full_like(values, offset)
    return offset + (values - values.min()) * (height / span)


def _convex_piece(rng: np.random.Generator, shape: GeneratorShape) -> Tuple[np.ndarray, np.ndarray]:
    knots = _knots(rng, shape)
    slopes = np.sort(rng.normal(size=knots.size - 1))
    values = np.concatenate([[0.0], np.cumsum(slopes * np.diff(knots))])
    return knots, _fit_range(values, rng, shape)


def _quasi_piece(rng: np.random.Generator, shape: GeneratorShape) -> Tuple[np.ndarray, np.ndarray]:
    knots = _knots(rng, shape)
    bottom = int(rng.integers(0, knots.size))
    steps = rng.exponential(1.0, size=knots.size) + 0.05
    values = np.zeros(knots.size)
    for i in range(bottom - 1, -1, -1):
        values[i] = values[i + 1] + steps[i]
    for i in range(bottom + 1, knots.size):
        values[i] = values[i - 1] + steps[i]
    return knots, _fit_range(values, rng, shape)


def _piecewise_linear(knots: np.ndarray, values: np.ndarray) -> Evaluator:
    def evaluate(x: np.ndarray) -> np.ndarray:
        return np.interp(x, knots, values)

    return evaluate


def _candidate(
    cls: ConvexityClass, rng: np.random.Generator, shape: GeneratorShape
) -> Tuple[Evaluator, Dict[str, Any]]:
    if cls.kind is ClassKind.CONVEX:
        knots, values = _convex_piece(rng, shape)
        return _piecewise_linear(knots, values), {
            "construction": "sorted-slope piecewise linear",
            "knots": knots.tolist(),
            "values": values.tolist(),
        }

    if cls.kind is ClassKind.QUASI:
        knots, values = _quasi_piece(rng, shape)
        return _piecewise_linear(knots, values), {
            "construction": "unimodal piecewise linear",
            "knots": knots.tolist(),
            "values": values.tolist(),
        }

    if cls.kind in (ClassKind.P, ClassKind.Q):
        pieces = []
        for _ in range(int(rng.integers(1, 4))):
            maker = _convex_piece if rng.random() < 0.5 else _quasi_piece
            pieces.append(maker(rng, shape))
        # Each piece is nonnegative and quasi-convex, so their sum is a P-function.
        knots = np.unique(np.concatenate([k for k, _ in pieces]))
        values = np.sum([np.interp(knots, k, v) for k, v in pieces], axis=0)
        return _piecewise_linear(knots, values), {
            "construction": f"sum of {len(pieces)} quasi-convex pieces",
            "knots": knots.tolist(),
            "values": values.tolist(),
        }

    s = cls.weight_exponent
    lo, hi = shape.value_range
    c = rng.uniform(0.1, 1.0) * (hi - lo) / max(shape.interval[1], 1.0) ** s
    d = rng.uniform(lo, lo + 0.25 * (hi - lo))
    if rng.random() < 0.5:
        knots, values = _convex_piece(rng, shape._replace(value_range=(0.0, 0.25 * (hi - lo))))
    else:
        knots, values = np.array(shape.interval, dtype=float), np.zeros(2)

    def evaluate(x: np.ndarray) -> np.ndarray:
        return c * np.power(np.maximum(x, 0.0), s) + d + np.interp(x, knots, values)

    return evaluate, {
        "construction": "c*x^s + d + convex piecewise linear",
        "c": c,
        "d": d,
        "s": s,
        "knots": knots.tolist(),
        "values": values.tolist(),
    }


def generate(
    cls: ConvexityClass, seed: int, shape: GeneratorShape = GeneratorShape()
) -> FunctionSpec:
    """
    Draw a random member of cls, reproducibly from seed.

    Convex and quasi-convex members are correct by construction; P, Q and
    s-convex candidates are also built to be members, and every candidate is
    certified on the default grid before it is returned.

    Raises:
        GenerationError: If no candidate passes certification within
            shape.max_attempts draws.
    """
    a, b = shape.interval
    if not 0.0 <= a < b:
        raise DomainError("interval", shape.interval, "generators need 0 <= a < b")
    lo, hi = shape.value_range
    if not 0.0 <= lo < hi:
        raise DomainError("value_range", shape.value_range, "needs 0 <= lo < hi")

    rng = np.random.default_rng(seed)
    grid = GridSpec(a, b)
    name = f"gen-{cls.kind.value}-{seed}"

    for attempt in range(1, shape.max_attempts + 1):
        evaluator, params = _candidate(cls, rng, shape)
        result = certify(evaluator, cls, grid, label=name)
        sign = check_nonnegative(evaluator, grid, label=name)
        if result.certified and sign.nonnegative:
            params.update({"seed": seed, "attempt": attempt, "class": cls.label})
            return FunctionSpec(
                id=name,
                evaluator=evaluator,
                domain=(a, b),
                declared_classes=frozenset({cls}),
                parameters=params,
            )
        logger.debug(
            "Attempt %d for %s rejected: %s",
            attempt,
            name,
            result.reason or f"negative at x={sign.argmin!r}",
        )

    raise GenerationError(cls.label, seed, shape.max_attempts)


# ---------------------------------------------------------------------------
# Built-in catalog
# ---------------------------------------------------------------------------


def _convex_classes() -> FrozenSet[ConvexityClass]:
    """Claims for a nonnegative convex function."""
    return frozenset(
        [CONVEX, QUASI_CONVEX, P_CLASS, Q_CLASS]
        + [ConvexityClass.s_convex(s) for s in CATALOG_S_VALUES]
    )


def _power_classes(exponent: float) -> FrozenSet[ConvexityClass]:
    return frozenset(
        [QUASI_CONVEX, P_CLASS, Q_CLASS]
        + [ConvexityClass.s_convex(s) for s in CATALOG_S_VALUES if s <= exponent]
    )


def _power(exponent: float) -> Evaluator:
    def evaluate(x: np.ndarray) -> np.ndarray:
        return np.power(np.maximum(x, 0.0), exponent)

    return evaluate


def builtin_catalog(a: float = 0.0, b: float = 1.0) -> List[FunctionSpec]:
    """
    Return the built-in test functions for the interval [a, b].

    Entries centred on the midpoint (abs-centered, logistic, sin-pi) follow
    the interval; the rest are the same closed forms on any interval.

    Raises:
        DomainError: Unless 0 <= a < b.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("a", (a, b), "interval endpoints must be finite")
    if a < 0:
        raise DomainError("a", a, "the interval must lie in [0, inf)")
    if not a < b:
        raise DomainError("b", b, f"the interval needs a < b (a={a!r})")

    mid = 0.5 * (a + b)
    width = b - a
    domain = (float(a), float(b))
    convex = _convex_classes()
    up, down, flat = Monotonicity.INCREASING, Monotonicity.DECREASING, Monotonicity.NONE

    def sin_bump(x: np.ndarray) -> np.ndarray:
        u = (x - a) / width
        return np.sin(np.pi * np.minimum(u, 1.0 - u))

    specs = [
        FunctionSpec("const1", lambda x: np.ones_like(x), domain, convex, True, flat),
        FunctionSpec("const2", lambda x: np.full_like(x, 2.0), domain, convex, True, flat),
        FunctionSpec("x", lambda x: x, domain, convex, False, up),
        FunctionSpec("x2", np.square, domain, convex, False, up),
    ]
    for exponent in CATALOG_S_VALUES:
        specs.append(
            FunctionSpec(
                f"pow-{exponent}",
                _power(exponent),
                domain,
                _power_classes(exponent),
                False,
                up,
                {"exponent": exponent},
            )
        )
    specs += [
        FunctionSpec("exp", np.exp, domain, convex, False, up),
        FunctionSpec("exp-neg", lambda x: np.exp(-x), domain, convex, False, down),
        FunctionSpec("abs-centered", lambda x: np.abs(x - mid), domain, convex, True, flat),
        FunctionSpec(
            "logistic",
            lambda x: 1.0 / (1.0 + np.exp(-8.0 * (x - mid) / width)),
            domain,
            frozenset({QUASI_CONVEX, P_CLASS, Q_CLASS}),
            False,
            up,
            {"steepness": 8.0},
        ),
        # Negative control: zero at both endpoints, one at the midpoint.
        FunctionSpec("sin-pi", sin_bump, domain, frozenset(), True, flat),
    ]
    return specs


def catalog_ids() -> List[str]:
    return [spec.id for spec in builtin_catalog()]


def catalog_lookup(function_id: str, a: float = 0.0, b: float = 1.0) -> FunctionSpec:
    """
    Find a catalog entry by id, built for [a, b].

    Raises:
        FunctionNotFoundError: If no entry has that id.
    """
    for spec in builtin_catalog(a, b):
        if spec.id == function_id:
            return spec
    raise FunctionNotFoundError(function_id, catalog_ids())


def lookup_many(function_ids: Iterable[str], a: float = 0.0, b: float = 1.0) -> List[FunctionSpec]:
    by_id = {spec.id: spec for spec in builtin_catalog(a, b)}
    missing = [fid for fid in function_ids if fid not in by_id]
    if missing:
        raise FunctionNotFoundError(missing[0], list(by_id))
    return [by_id[fid] for fid in function_ids]
