"""
Euler Beta and log-Gamma evaluation.

Floating values come from a 13-term Lanczos rational approximation
(g = 6.0246800407767296). Integer arguments are routed through an exact
rational path so the most frequently checked values are exactly rounded;
that same path is the oracle the test suites compare against.
"""

import logging
import math
import sys
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P

from ineqcheck.exceptions import ArgumentRangeError, DomainError

logger = logging.getLogger("ineqcheck")

# Exact rationals are plain Fractions: always reduced, denominator > 0.
ExactRational = Fraction

MAX_ARGUMENT = 1.0e4
EXACT_PATH_LIMIT = 1000  # largest m + n - 1 routed through beta_exact
LANCZOS_G = 6.024680040776729583740234375

# Coefficients in increasing powers of x. The denominator is x(x+1)...(x+11).
_LANCZOS_NUM = np.array(
    [
        56906521.91347156388090791033559122686859,
        103794043.1163445451906271053616070238554,
        86363131.28813859145546927288977868422342,
        43338889.32467613834773723740590533316085,
        14605578.08768506808414169982791359218571,
        3481712.15498064590882071018964774556468,
        601859.6171681098786670226533699352302507,
        75999.29304014542649875303443598909137092,
        6955.999602515376140356310115515198987526,
        449.9445569063168119446858607650988409623,
        19.51992788247617482847860966235652136208,
        0.5098416655656676188125178644804694509993,
        0.006061842346248906525783753964555936883222,
    ]
)
_LANCZOS_DEN = np.array(
    [
        0.0,
        39916800.0,
        120543840.0,
        150917976.0,
        105258076.0,
        45995730.0,
        13339535.0,
        2637558.0,
        357423.0,
        32670.0,
        1925.0,
        66.0,
        1.0,
    ]
)

_LOG_TINY = math.log(sys.float_info.min)


class BetaArgs(NamedTuple):
    """Parameters (m, n) of the Beta function; both must be positive."""

    m: float
    n: float


def _check_positive(name: str, value: float, function: str) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise DomainError(name, value, f"{function} needs a real number")
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(name, value, f"{function} is defined for {name} > 0")
    if x > MAX_ARGUMENT:
        raise ArgumentRangeError(
            function,
            f"{name}={x!r} exceeds the supported argument cap {MAX_ARGUMENT:g}",
        )
    return x


def lanczos_sum_expg_scaled(x: float) -> float:
    """
    Rational Lanczos sum scaled by exp(-g).

    For x > 1 both polynomials are evaluated in 1/x so large arguments
    never overflow.
    """
    if x > 1.0:
        y = 1.0 / x
        return float(P.polyval(y, _LANCZOS_NUM[::-1]) / P.polyval(y, _LANCZOS_DEN[::-1]))
    return float(P.polyval(x, _LANCZOS_NUM) / P.polyval(x, _LANCZOS_DEN))


def _log_gamma_unchecked(x: float) -> float:
    zgh = x + LANCZOS_G - 0.5
    return math.log(lanczos_sum_expg_scaled(x)) + (x - 0.5) * (math.log(zgh) - 1.0)


def log_gamma(x: float) -> float:
    """
    Natural logarithm of Gamma(x) for 0 < x <= 1e4.

    Raises:
        DomainError: If x <= 0 or x is not finite.
        ArgumentRangeError: If x exceeds the supported cap.
    """
    x = _check_positive("x", x, "log_gamma")
    return _log_gamma_unchecked(x)


def log_beta(m: float, n: float) -> float:
    """
    Natural logarithm of Beta(m, n).

    The Gamma ratio is assembled from the Lanczos pieces directly, so the
    large log-Gamma terms never cancel against each other.
    """
    m = _check_positive("m", m, "beta")
    n = _check_positive("n", n, "beta")

    # a >= b keeps the evaluation symmetric in its arguments
    a, b = (m, n) if m >= n else (n, m)
    c = a + b
    bgh = b + LANCZOS_G - 0.5
    cgh = c + LANCZOS_G - 0.5

    log_sums = (
        math.log(lanczos_sum_expg_scaled(a))
        + math.log(lanczos_sum_expg_scaled(b))
        - math.log(lanczos_sum_expg_scaled(c))
    )
    log_a_over_c = math.log1p(-b / cgh)  # cgh - agh == b
    log_b_over_c = math.log(bgh / cgh)
    return (
        log_sums
        + (a - 0.5 - b) * log_a_over_c
        + b * (log_a_over_c + log_b_over_c)
        + 0.5 * (1.0 - math.log(bgh))
    )


def beta_exact(m: int, n: int) -> Fraction:
    """
    Exact Beta value (m-1)!(n-1)!/(m+n-1)! for positive integers, as a reduced Fraction.

    Examples:
        >>> beta_exact(2, 4)
        Fraction(1, 20)
    """
    for name, value in (("m", m), ("n", n)):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise DomainError(name, value, "beta_exact needs a positive integer")
        if value < 1:
            raise DomainError(name, value, "beta_exact is defined for integers >= 1")
    m, n = int(m), int(n)
    return Fraction(1, (m + n - 1) * math.comb(m + n - 2, m - 1))


def beta(m: float, n: float) -> float:
    """
    Euler Beta function B(m, n) = Gamma(m)Gamma(n)/Gamma(m+n).

    Integer pairs with m + n - 1 <= EXACT_PATH_LIMIT are computed exactly and
    rounded once; everything else goes through log_beta.

    Raises:
        DomainError: If m <= 0 or n <= 0.
        ArgumentRangeError: If an argument exceeds 1e4 or the value underflows.
    """
    mf = _check_positive("m", m, "beta")
    nf = _check_positive("n", n, "beta")

    if mf.is_integer() and nf.is_integer() and mf + nf - 1 <= EXACT_PATH_LIMIT:
        value = float(beta_exact(int(mf), int(nf)))
    else:
        log_value = log_beta(mf, nf)
        if log_value < _LOG_TINY:
            value = 0.0
        else:
            value = math.exp(log_value)

    if value < sys.float_info.min:
        raise ArgumentRangeError(
            "beta",
            f"B({mf!r}, {nf!r}) underflows double precision; use log_beta instead",
        )
    return value
