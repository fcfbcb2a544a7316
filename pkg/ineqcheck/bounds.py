"""
Closed-form upper bounds for the weighted-product integral.

Every bound is a nonnegative combination of Beta values scaled by
(b-a)^(p+q+1), built from the endpoint values f(a), f(b). Each Beta term that
enters a bound is recorded so reports can show exactly what was evaluated.
Specializations (equal exponents, symmetric or monotone f, equal endpoint
values) reuse the parent formula and only change the formula id.
"""

import math
from typing import List, NamedTuple, Optional, Tuple

from ineqcheck.exceptions import DomainError
from ineqcheck.function_catalog import ClassKind, ConvexityClass, Monotonicity
from ineqcheck.special_fn import beta

# Stable formula identifiers used in reports, CSV rows and the HTTP API.
S_CONVEX = "thm2.1"
S_CONVEX_EQUAL_EXPONENTS = "cor2.1"
S_CONVEX_SYMMETRIC = "cor2.2"
CONVEX = "cor2.3"
CONVEX_EQUAL_EXPONENTS_SYMMETRIC = "cor2.4"
QUASI_CONVEX = "thm2.2"
QUASI_CONVEX_MONOTONE = "cor2.5"
P_CLASS = "thm2.3"
Q_CLASS = "thm2.4"
Q_CLASS_EQUAL_ENDPOINTS = "cor2.6"
CHANGE_OF_VARIABLES = "lem2.1"

FORMULA_IDS: Tuple[str, ...] = (
    S_CONVEX,
    S_CONVEX_EQUAL_EXPONENTS,
    S_CONVEX_SYMMETRIC,
    CONVEX,
    CONVEX_EQUAL_EXPONENTS_SYMMETRIC,
    QUASI_CONVEX,
    QUASI_CONVEX_MONOTONE,
    P_CLASS,
    Q_CLASS,
    Q_CLASS_EQUAL_ENDPOINTS,
    CHANGE_OF_VARIABLES,
)


class EndpointData(NamedTuple):
    """Endpoint values f(a), f(b) and the interval they come from."""

    fa: float
    fb: float
    a: float
    b: float

    def validate(self) -> "EndpointData":
        for name in ("fa", "fb", "a", "b"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(name, value, "must be finite")
        if not self.a < self.b:
            raise DomainError("b", self.b, f"the interval needs a < b (a={self.a!r})")
        if self.fa < 0:
            raise DomainError("fa", self.fa, "the bounds need f(a) >= 0")
        if self.fb < 0:
            raise DomainError("fb", self.fb, "the bounds need f(b) >= 0")
        return self

    @property
    def width(self) -> float:
        return self.b - self.a


class BetaTerm(NamedTuple):
    """One Beta evaluation: coefficient * B(m, n)."""

    m: float
    n: float
    coefficient: float
    value: float


class BoundValue(NamedTuple):
    value: float
    formula_id: str
    beta_terms: Tuple[BetaTerm, ...]


def _check_exponents(p: float, q: float) -> None:
    for name, value in (("p", p), ("q", q)):
        if not (math.isfinite(value) and value > 0):
            raise DomainError(name, value, "weight exponents must be finite and > 0")


def _scale(e: EndpointData, p: float, q: float) -> float:
    return e.width ** (p + q + 1.0)


def _combine(formula_id: str, terms: List[Tuple[float, float, float]]) -> BoundValue:
    beta_terms = tuple(BetaTerm(m, n, c, beta(m, n)) for m, n, c in terms)
    value = math.fsum(t.coefficient * t.value for t in beta_terms)
    return BoundValue(value, formula_id, beta_terms)


def bound_s_convex(
    e: EndpointData, p: float, q: float, s: float, formula_id: str = S_CONVEX
) -> BoundValue:
    """
    Bound for f s-convex in the second sense:

        (b-a)^(p+q+1)/2 * { (fa^2+fb^2) [B(p+1, 2s+q+1) + B(q+1, 2s+p+1)]
                            + 4 fa fb B(p+s+1, q+s+1) }

    Raises:
        DomainError: If p or q <= 0, s is outside (0, 1], or fa, fb < 0.
    """
    e.validate()
    _check_exponents(p, q)
    if not (math.isfinite(s) and 0.0 < s <= 1.0):
        raise DomainError("s", s, "s-convexity is defined for s in (0, 1]")

    half = 0.5 * _scale(e, p, q)
    squares = half * (e.fa * e.fa + e.fb * e.fb)
    return _combine(
        formula_id,
        [
            (p + 1.0, 2.0 * s + q + 1.0, squares),
            (q + 1.0, 2.0 * s + p + 1.0, squares),
            (p + s + 1.0, q + s + 1.0, 4.0 * half * e.fa * e.fb),
        ],
    )


def bound_convex(e: EndpointData, p: float, q: float, formula_id: str = CONVEX) -> BoundValue:
    """Bound for convex f; the s-convex bound at s = 1."""
    return bound_s_convex(e, p, q, 1.0, formula_id=formula_id)


def bound_quasi_convex(
    e: EndpointData, p: float, q: float, monotonicity: Optional[Monotonicity] = None
) -> BoundValue:
    """
    Bound for quasi-convex f: (b-a)^(p+q+1) max(fa, fb)^2 B(p+1, q+1).

    For monotone f the maximum is the right (increasing) or left (decreasing)
    endpoint value, and the formula id says so.

    Raises:
        DomainError: On invalid parameters, or endpoint values that contradict
            the stated monotonicity.
    """
    e.validate()
    _check_exponents(p, q)

    formula_id = QUASI_CONVEX
    top = max(e.fa, e.fb)
    if monotonicity is Monotonicity.INCREASING:
        if e.fa > e.fb:
            raise DomainError("fa", e.fa, f"an increasing f needs f(a) <= f(b) = {e.fb!r}")
        formula_id, top = QUASI_CONVEX_MONOTONE, e.fb
    elif monotonicity is Monotonicity.DECREASING:
        if e.fb > e.fa:
            raise DomainError("fb", e.fb, f"a decreasing f needs f(b) <= f(a) = {e.fa!r}")
        formula_id, top = QUASI_CONVEX_MONOTONE, e.fa

    return _combine(formula_id, [(p + 1.0, q + 1.0, _scale(e, p, q) * top * top)])


def bound_p_class(e: EndpointData, p: float, q: float) -> BoundValue:
    """Bound for P-class f: (b-a)^(p+q+1) (fa + fb)^2 B(p+1, q+1)."""
    e.validate()
    _check_exponents(p, q)
    total = e.fa + e.fb
    return _combine(P_CLASS, [(p + 1.0, q + 1.0, _scale(e, p, q) * total * total)])


def bound_q_class(e: EndpointData, p: float, q: float) -> BoundValue:
    """
    Bound for Q-class f, defined only for p, q > 1:

        (b-a)^(p+q+1)/2 * { (fa^2+fb^2) [B(p+1, q-1) + B(p-1, q+1)] + 4 fa fb B(p, q) }

    Equal endpoint values give the cor2.6 id.

    Raises:
        DomainError: If p <= 1 or q <= 1 (B(p-1, .) or B(., q-1) diverges).
    """
    e.validate()
    _check_exponents(p, q)
    if p <= 1.0:
        raise DomainError("p", p, "the Q-class bound needs p > 1")
    if q <= 1.0:
        raise DomainError("q", q, "the Q-class bound needs q > 1")

    half = 0.5 * _scale(e, p, q)
    squares = half * (e.fa * e.fa + e.fb * e.fb)
    formula_id = Q_CLASS_EQUAL_ENDPOINTS if e.fa == e.fb else Q_CLASS
    return _combine(
        formula_id,
        [
            (p + 1.0, q - 1.0, squares),
            (p - 1.0, q + 1.0, squares),
            (p, q, 4.0 * half * e.fa * e.fb),
        ],
    )


def bound_for_class(
    cls: ConvexityClass,
    e: EndpointData,
    p: float,
    q: float,
    symmetric: bool = False,
    monotonicity: Optional[Monotonicity] = None,
) -> BoundValue:
    """Evaluate the bound matching cls and label the specialization that applies."""
    if cls.kind is ClassKind.CONVEX:
        formula_id = CONVEX_EQUAL_EXPONENTS_SYMMETRIC if (p == q and symmetric) else CONVEX
        return bound_convex(e, p, q, formula_id=formula_id)
    if cls.kind is ClassKind.S_CONVEX:
        if p == q:
            formula_id = S_CONVEX_EQUAL_EXPONENTS
        elif symmetric:
            formula_id = S_CONVEX_SYMMETRIC
        else:
            formula_id = S_CONVEX
        return bound_s_convex(e, p, q, cls.weight_exponent, formula_id=formula_id)
    if cls.kind is ClassKind.QUASI:
        return bound_quasi_convex(e, p, q, monotonicity)
    if cls.kind is ClassKind.P:
        return bound_p_class(e, p, q)
    return bound_q_class(e, p, q)
